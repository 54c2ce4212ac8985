#include "qcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qcap/errors.hpp"
#include "qcap/random.hpp"

namespace qcap {

double coherent_information(const StinespringIsometry& iso, const DensityMatrix& rho) {
  if (rho.dim() != iso.din()) throw DimensionError("coherent_information: input dimension mismatch");
  const ComplexMatrix tau = joint_output(iso, rho.matrix());
  const std::vector<int> dims{static_cast<int>(iso.dout()), static_cast<int>(iso.denv())};
  const double hb = entropy_of_spectrum(hermitian_eigenvalues(partial_trace(tau, dims, {0})));
  const double he = entropy_of_spectrum(hermitian_eigenvalues(partial_trace(tau, dims, {1})));
  return hb - he;
}

double coherent_information(const KrausChannel& ch, const DensityMatrix& rho) {
  return coherent_information(kraus_to_stinespring(ch), rho);
}

Index num_state_parameters(Index dim) { return dim * (dim + 1); }

DensityMatrix state_from_parameters(const double* theta, Index dim) {
  ComplexMatrix l = ComplexMatrix::Zero(dim, dim);
  Index p = 0;
  for (Index i = 0; i < dim; ++i) {
    for (Index j = 0; j <= i; ++j) {
      l(i, j) = Complex(theta[p], theta[p + 1]);
      p += 2;
    }
  }
  ComplexMatrix rho = l * l.adjoint();
  const double tr = rho.trace().real();
  if (!(tr > 1e-300)) return DensityMatrix::maximally_mixed(dim);
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

namespace {

struct Objective {
  const StinespringIsometry* iso;
  Index dim;
  int evaluations = 0;
};

double negative_coherent_information(const gsl_vector* x, void* params) {
  auto* obj = static_cast<Objective*>(params);
  ++obj->evaluations;
  std::vector<double> theta(x->size);
  for (std::size_t i = 0; i < x->size; ++i) theta[i] = gsl_vector_get(x, i);
  return -coherent_information(*obj->iso, state_from_parameters(theta.data(), obj->dim));
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

struct RestartOutcome {
  double value;
  std::vector<double> theta;
  int evaluations;
  bool converged;
};

RestartOutcome run_restart(const StinespringIsometry& iso, std::vector<double> start,
                           const MaximizeOptions& options) {
  const Index dim = iso.din();
  const std::size_t n = start.size();
  Objective obj{&iso, dim};
  gsl_multimin_function fn{&negative_coherent_information, n, &obj};

  VectorPtr x(gsl_vector_alloc(n));
  VectorPtr step(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set(step.get(), i, 0.3);
  }
  MinimizerPtr minimizer(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());

  const double size_tol = std::sqrt(options.tol);
  bool converged = false;
  while (obj.evaluations < options.max_evals) {
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(minimizer.get());
    if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  RestartOutcome out;
  out.value = -minimizer->fval;
  out.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.theta[i] = gsl_vector_get(minimizer->x, i);
  out.evaluations = obj.evaluations;
  out.converged = converged;
  return out;
}

}  // namespace

CoherentInfoResult maximize_coherent_information(const StinespringIsometry& iso, const MaximizeOptions& options) {
  const Index dim = iso.din();
  if (options.covariant) {
    DensityMatrix mixed = DensityMatrix::maximally_mixed(dim);
    const double value = coherent_information(iso, mixed);
    return CoherentInfoResult{value, std::move(mixed), 1, true};
  }
  if (options.restarts < 1 || options.max_evals < 1 || !(options.tol > 0.0)) {
    throw ValidationError("maximize_coherent_information: restarts, max_evals and tol must be positive");
  }

  // Start 0 is the maximally mixed state (L = I); the rest are random.
  const Index n = num_state_parameters(dim);
  std::vector<std::vector<double>> starts;
  starts.reserve(options.restarts);
  {
    std::vector<double> theta(n, 0.0);
    Index p = 0;
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j <= i; ++j) {
        if (i == j) theta[p] = 1.0;
        p += 2;
      }
    }
    starts.push_back(std::move(theta));
  }
  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 1; r < options.restarts; ++r) {
    std::vector<double> theta(n);
    for (auto& t : theta) t = normal(rng);
    starts.push_back(std::move(theta));
  }

  gsl_error_handler_t* previous = gsl_set_error_handler_off();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads ? options.threads : hw,
                                                           static_cast<unsigned>(starts.size())));
  std::vector<std::optional<RestartOutcome>> outcomes(starts.size());
  std::exception_ptr failure;
  for (std::size_t begin = 0; begin < starts.size(); begin += workers) {
    std::vector<std::future<RestartOutcome>> batch;
    const std::size_t end = std::min(starts.size(), begin + workers);
    for (std::size_t r = begin; r < end; ++r) {
      batch.push_back(std::async(std::launch::async, run_restart, std::cref(iso), starts[r], std::cref(options)));
    }
    for (std::size_t r = begin; r < end; ++r) {
      try {
        outcomes[r] = batch[r - begin].get();
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
  }
  gsl_set_error_handler(previous);
  if (failure) std::rethrow_exception(failure);

  // Deterministic aggregation: highest value, lowest restart index on ties.
  std::size_t best = 0;
  int evaluations = 0;
  bool all_converged = true;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    evaluations += outcomes[r]->evaluations;
    all_converged = all_converged && outcomes[r]->converged;
    if (outcomes[r]->value > outcomes[best]->value) best = r;
  }
  DensityMatrix state = state_from_parameters(outcomes[best]->theta.data(), dim);
  return CoherentInfoResult{outcomes[best]->value, std::move(state), evaluations, all_converged};
}

SubadditivityResult subadditivity_check(const KrausChannel& ch, const DensityMatrix& rho12) {
  const Index din = ch.din();
  if (rho12.dim() != din * din) throw DimensionError("subadditivity_check: input must live on din^2 dimensions");
  const std::vector<int> dims{static_cast<int>(din), static_cast<int>(din)};
  const DensityMatrix rho1(partial_trace(rho12.matrix(), dims, {0}), rho12.tolerance());
  const DensityMatrix rho2(partial_trace(rho12.matrix(), dims, {1}), rho12.tolerance());
  const StinespringIsometry single = kraus_to_stinespring(ch);
  const StinespringIsometry doubled = kraus_to_stinespring(tensor(ch, ch));
  return SubadditivityResult{coherent_information(doubled, rho12),
                             coherent_information(single, rho1) + coherent_information(single, rho2)};
}

}  // namespace qcap
