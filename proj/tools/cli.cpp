#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcap/capacity.hpp"
#include "qcap/channel_io.hpp"
#include "qcap/cloners.hpp"
#include "qcap/degradability.hpp"
#include "qcap/errors.hpp"
#include "qcap/unruh.hpp"

namespace qcap::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Everything the subcommands read. Filled by CLI11, then validated before any
// computation starts.
struct CliConfig {
  bool json_output = false;
  std::uint64_t seed = 20090917;

  int n = 0;
  int m = 0;
  bool optimize = false;
  int restarts = 20;

  std::optional<double> z;
  std::vector<double> sweep;
  int steps = 100;
  double tail_tol = 1e-12;
  std::string out_path;

  std::string channel_path;
  std::vector<std::string> modes;
  std::optional<double> residual_tol;
  double psd_tol = 1e-8;
  int max_iters = 50000;
  long long max_choi_dim = 64;
  bool allow_large = false;

  double alpha = 0.0;
  double beta = 0.0;
};

double default_residual_tolerance() {
  const char* raw = std::getenv(kToleranceEnvVar);
  if (raw == nullptr || *raw == '\0') return FeasibilityOptions{}.residual_tol;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(std::string(kToleranceEnvVar) + " must be a positive number, got '" + raw + "'");
  }
  return v;
}

void require_cloner_range(const CliConfig& cfg) {
  if (cfg.n < 1 || cfg.m < cfg.n) {
    throw UsageError("cloner needs 1 <= n <= m (got n=" + std::to_string(cfg.n) + ", m=" + std::to_string(cfg.m) + ")");
  }
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << "\n"; }

int cmd_capacity_cloner(const CliConfig& cfg, std::ostream& out) {
  require_cloner_range(cfg);
  const ClonerSpec spec{cfg.n, cfg.m};
  spec.validate();
  const StinespringIsometry iso = build_cloner_isometry(spec);
  const double closed = cloner_capacity_closed_form(spec);
  double numeric = coherent_information(iso, DensityMatrix::maximally_mixed(iso.din()));
  std::string route = "maximally mixed input";
  if (cfg.optimize) {
    MaximizeOptions opts;
    opts.seed = cfg.seed;
    opts.restarts = cfg.restarts;
    opts.threads = 1;
    numeric = maximize_coherent_information(iso, opts).value;
    route = "Nelder-Mead over input states";
  }
  const double delta = std::abs(numeric - closed);
  if (cfg.json_output) {
    emit(out, json{{"command", "capacity cloner"}, {"n", cfg.n}, {"m", cfg.m}, {"closed_form_bits", closed},
                   {"numerical_bits", numeric}, {"numerical_route", route}, {"delta", delta}});
  } else {
    out << "cloner " << cfg.n << " -> " << cfg.m << "\n"
        << "closed form   Q = " << fmt(closed) << " bits\n"
        << "numerical     Q = " << fmt(numeric) << " bits (" << route << ")\n"
        << "delta           = " << fmt_short(delta) << "\n";
  }
  return kExitOk;
}

int cmd_capacity_unruh(const CliConfig& cfg, std::ostream& out) {
  if (!(cfg.tail_tol > 0.0)) throw UsageError("--tail-tol must be positive");
  if (cfg.z.has_value() == !cfg.sweep.empty()) throw UsageError("give exactly one of --z or --sweep");
  if (cfg.z) {
    const double z = *cfg.z;
    if (!(z > 0.0 && z < 1.0)) throw UsageError("--z must lie in (0, 1), got " + fmt(z));
    const UnruhCapacity q = unruh_capacity(z, cfg.tail_tol);
    if (cfg.json_output) {
      emit(out, json{{"command", "capacity unruh"}, {"z", z}, {"q_bits", q.value}, {"k_max", q.k_max},
                     {"tail_bound", q.tail_bound}});
    } else {
      out << "unruh z = " << fmt(z) << "\n"
          << "Q = " << fmt(q.value) << " bits\n"
          << "series truncated after k = " << q.k_max << ", tail bound " << fmt_short(q.tail_bound) << "\n";
    }
    return kExitOk;
  }
  if (cfg.sweep.size() != 2) throw UsageError("--sweep takes z_min z_max");
  const double lo = cfg.sweep[0], hi = cfg.sweep[1];
  if (!(lo > 0.0 && lo < hi && hi < 1.0)) throw UsageError("--sweep needs 0 < z_min < z_max < 1");
  if (cfg.steps < 2) throw UsageError("--steps must be at least 2");
  const std::vector<UnruhSweepRow> rows = unruh_sweep(lo, hi, cfg.steps, cfg.tail_tol);
  std::ostringstream csv;
  write_unruh_csv(csv, rows);
  if (cfg.out_path.empty()) {
    out << csv.str();
  } else {
    write_file_atomic(cfg.out_path, csv.str());
    if (cfg.json_output) {
      emit(out, json{{"command", "capacity unruh"}, {"rows", rows.size()}, {"out", cfg.out_path}});
    } else {
      out << "wrote " << rows.size() << " rows to " << cfg.out_path << "\n";
    }
  }
  return kExitOk;
}

std::string verdict_text(const DegradabilityVerdict& v) {
  std::ostringstream s;
  s << to_string(v.mode) << ": ";
  if (v.holds) {
    s << "yes (residual " << fmt_short(v.residual) << ", min eigenvalue " << fmt_short(v.min_eigenvalue)
      << ", iterations " << v.iterations << ")";
  } else {
    s << "not found (best residual " << fmt_short(v.residual) << ", iterations " << v.iterations;
    if (v.inconsistent) s << ", linear constraints inconsistent";
    if (!v.converged) s << ", iteration cap reached";
    s << "; not a proof of absence)";
  }
  return s.str();
}

int cmd_classify(const CliConfig& cfg, std::ostream& out) {
  FeasibilityOptions opts;
  opts.residual_tol = cfg.residual_tol ? *cfg.residual_tol : default_residual_tolerance();
  opts.psd_tol = cfg.psd_tol;
  opts.max_iters = cfg.max_iters;
  opts.max_choi_dim = cfg.allow_large ? std::numeric_limits<Index>::max() : static_cast<Index>(cfg.max_choi_dim);
  if (!(opts.residual_tol > 0.0) || !(opts.psd_tol >= 0.0) || opts.max_iters < 0 || cfg.max_choi_dim < 1) {
    throw UsageError("tolerances and limits must be positive");
  }
  std::vector<DegradabilityMode> modes;
  try {
    for (const auto& name : cfg.modes) modes.push_back(parse_mode(name));
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  if (modes.empty()) modes.assign(kAllModes.begin(), kAllModes.end());

  const KrausChannel ch = read_channel_json(cfg.channel_path);
  const ClassificationReport report = classify(ch, modes, opts);
  if (cfg.json_output) {
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
      verdicts.push_back(json{{"mode", to_string(v.mode)}, {"holds", v.holds}, {"residual", v.residual},
                              {"min_eigenvalue", v.min_eigenvalue}, {"iterations", v.iterations},
                              {"converged", v.converged}, {"inconsistent", v.inconsistent}});
    }
    emit(out, json{{"command", "classify"}, {"file", cfg.channel_path}, {"din", report.din}, {"dout", report.dout},
                   {"denv", report.denv}, {"choi_rank", report.choi_rank},
                   {"entanglement_breaking", report.entanglement_breaking}, {"verdicts", verdicts}});
  } else {
    out << "channel " << cfg.channel_path << ": din=" << report.din << " dout=" << report.dout
        << " denv=" << report.denv << "\n"
        << "choi rank: " << report.choi_rank << "\n"
        << "entanglement breaking: " << (report.entanglement_breaking ? "yes" : "no") << "\n";
    for (const auto& v : report.verdicts) out << verdict_text(v) << "\n";
  }
  return kExitOk;
}

int report_export(const CliConfig& cfg, std::ostream& out, const KrausChannel& ch, const std::string& what) {
  write_channel_json(cfg.out_path, ch);
  if (cfg.json_output) {
    emit(out, json{{"command", what}, {"out", cfg.out_path}, {"din", ch.din()}, {"dout", ch.dout()},
                   {"kraus", ch.num_kraus()}});
  } else {
    out << "wrote " << what << " channel (din=" << ch.din() << ", dout=" << ch.dout() << ", " << ch.num_kraus()
        << " Kraus operators) to " << cfg.out_path << "\n";
  }
  return kExitOk;
}

int cmd_export_cloner(const CliConfig& cfg, std::ostream& out) {
  require_cloner_range(cfg);
  const ClonerSpec spec{cfg.n, cfg.m};
  spec.validate();
  return report_export(cfg, out, cloner_channel(spec), "cloner");
}

int cmd_export_rank2(const CliConfig& cfg, std::ostream& out) {
  if (!std::isfinite(cfg.alpha) || !std::isfinite(cfg.beta)) throw UsageError("angles must be finite");
  return report_export(cfg, out, rank2_qubit_channel({cfg.alpha, cfg.beta}), "rank-2 qubit");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Quantum capacities of cloning machines and the Unruh channel; degradability classification"};
  app.name("qcap");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", cfg.json_output, "Machine-readable JSON report");
  app.add_option("--seed", cfg.seed, "Seed for randomized searches");

  CLI::App* capacity = app.add_subcommand("capacity", "Quantum capacity");
  capacity->require_subcommand(1);
  capacity->fallthrough();
  CLI::App* cap_cloner = capacity->add_subcommand("cloner", "N -> M universal cloner");
  cap_cloner->add_option("--n", cfg.n, "Input copies N")->required();
  cap_cloner->add_option("--m", cfg.m, "Output copies M")->required();
  cap_cloner->add_flag("--optimize", cfg.optimize, "Maximize over input states instead of using covariance");
  cap_cloner->add_option("--restarts", cfg.restarts, "Optimizer restarts with --optimize");

  CLI::App* cap_unruh = capacity->add_subcommand("unruh", "Unruh channel");
  cap_unruh->add_option("--z", cfg.z, "Acceleration parameter in (0, 1)");
  cap_unruh->add_option("--sweep", cfg.sweep, "z_min z_max")->expected(2);
  cap_unruh->add_option("--steps", cfg.steps, "Grid points for --sweep");
  cap_unruh->add_option("--tail-tol", cfg.tail_tol, "Certified bound on the truncated series tail");
  cap_unruh->add_option("--out", cfg.out_path, "CSV output file (stdout if absent)");

  CLI::App* cls = app.add_subcommand("classify", "Degradability of a channel file");
  cls->add_option("file", cfg.channel_path, "Channel JSON")->required();
  cls->add_option("--modes", cfg.modes, "Comma-separated subset of modes")->delimiter(',');
  cls->add_option("--residual-tol", cfg.residual_tol, "Composition residual tolerance");
  cls->add_option("--psd-tol", cfg.psd_tol, "Allowed negative eigenvalue");
  cls->add_option("--max-iters", cfg.max_iters, "Iteration cap per mode");
  cls->add_option("--max-choi-dim", cfg.max_choi_dim, "Largest Choi dimension of the unknown map");
  cls->add_flag("--allow-large", cfg.allow_large, "Lift the Choi dimension cap (slow)");

  CLI::App* exp_cloner = app.add_subcommand("export-cloner", "Write a cloner channel file");
  exp_cloner->add_option("--n", cfg.n, "Input copies N")->required();
  exp_cloner->add_option("--m", cfg.m, "Output copies M")->required();
  exp_cloner->add_option("--out", cfg.out_path, "Output file")->required();

  CLI::App* exp_rank2 = app.add_subcommand("export-rank2", "Write a rank-2 qubit channel file");
  exp_rank2->add_option("--alpha", cfg.alpha, "Angle alpha (radians)")->required();
  exp_rank2->add_option("--beta", cfg.beta, "Angle beta (radians)")->required();
  exp_rank2->add_option("--out", cfg.out_path, "Output file")->required();

  std::vector<const char*> argv{"qcap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cap_cloner->parsed()) return cmd_capacity_cloner(cfg, out);
    if (cap_unruh->parsed()) return cmd_capacity_unruh(cfg, out);
    if (cls->parsed()) return cmd_classify(cfg, out);
    if (exp_cloner->parsed()) return cmd_export_cloner(cfg, out);
    if (exp_rank2->parsed()) return cmd_export_rank2(cfg, out);
    throw UsageError("no command given");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace qcap::cli
