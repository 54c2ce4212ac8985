#pragma once

// Degradability classification: closed-form candidate maps for rank-2 qubit
// channels and a general alternating-projection feasibility search.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/qmat.hpp"

namespace qcap {

struct Rank2QubitParams {
  double alpha;  // radians
  double beta;   // radians
};

/// A+ = diag(cos a, cos b), A- = [[0, sin b], [sin a, 0]].
KrausChannel rank2_qubit_channel(const Rank2QubitParams& p);

struct CandidateMap {
  ChoiMatrix choi;
  RealVector eigenvalues;  // descending
  bool is_completely_positive(double tol = kNotCpThreshold) const;
};

/// Pseudo-inverse cutoff on singular values of the transfer matrix.
inline constexpr double kPseudoInverseCutoff = 1e-10;

/// Map D^a with D^a o N^c = C o N, built as T1(Gamma(T_N pinv(T_Nc))).
/// Throws SingularConstructionError when ker T_Nc is not inside ker T_N.
CandidateMap candidate_conjugate_antidegrading_map(const KrausChannel& ch);

/// Map D with D o N = C o N^c, built as T1(Gamma(T_Nc pinv(T_N))).
CandidateMap candidate_conjugate_degrading_map(const KrausChannel& ch);

/// Closed-form spectra for rank2_qubit_channel, ascending. nullopt when the
/// parameters sit on the degenerate set of the respective formula.
std::optional<std::array<double, 4>> conjugate_antidegrading_spectrum(const Rank2QubitParams& p);
std::optional<std::array<double, 4>> conjugate_degrading_spectrum(const Rank2QubitParams& p);

/// PPT test on the Choi matrix; exact for din * dout <= 6.
bool is_entanglement_breaking(const KrausChannel& ch, double tol = 1e-9);

enum class DegradabilityMode { degradable, antidegradable, conjugate_degradable, conjugate_antidegradable };

inline constexpr std::array<DegradabilityMode, 4> kAllModes = {
    DegradabilityMode::degradable, DegradabilityMode::antidegradable, DegradabilityMode::conjugate_degradable,
    DegradabilityMode::conjugate_antidegradable};

std::string to_string(DegradabilityMode mode);
/// Accepts the snake_case names; hyphens are treated as underscores.
/// Throws ValidationError on anything else.
DegradabilityMode parse_mode(std::string_view name);

struct FeasibilityOptions {
  double residual_tol = 1e-6;
  double psd_tol = 1e-8;
  int max_iters = 50000;
  /// Largest dimension of the unknown Choi matrix; ResourceError above it.
  Index max_choi_dim = 64;
  int check_every = 10;
  /// Give up when the best residual has not dropped by 0.1% over this many
  /// iterations.
  int stall_window = 5000;
};

struct DegradabilityVerdict {
  DegradabilityMode mode;
  bool holds;
  std::optional<ChoiMatrix> witness;  // present when holds
  double residual;                    // Frobenius defect of the composition plus trace preservation
  double min_eigenvalue;              // of the reported candidate
  int iterations;
  /// False when the iteration cap was hit. A false `holds` is never a proof
  /// that no map exists.
  bool converged;
  /// The linear constraints alone have no solution.
  bool inconsistent;
};

/// Searches for a CPTP map D with
///   degradable:               D o N   = N^c
///   antidegradable:           D o N^c = N
///   conjugate_degradable:     D o N   = C o N^c
///   conjugate_antidegradable: D o N^c = C o N
/// by Dykstra alternating projections between the PSD cone and the affine
/// set cut out by the composition and trace-preservation constraints.
DegradabilityVerdict feasibility_search(const KrausChannel& ch, DegradabilityMode mode,
                                        const FeasibilityOptions& options = {});

struct ClassificationReport {
  Index din;
  Index dout;
  Index denv;
  Index choi_rank;
  bool entanglement_breaking;
  std::vector<DegradabilityVerdict> verdicts;
};

ClassificationReport classify(const KrausChannel& ch, const std::vector<DegradabilityMode>& modes = {kAllModes.begin(), kAllModes.end()},
                              const FeasibilityOptions& options = {});

}  // namespace qcap
