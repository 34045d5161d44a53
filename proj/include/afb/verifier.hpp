#pragma once

// Executable checks of the boundedness argument along simulated
// trajectories. Each check returns one CheckRecord; verify() assembles the
// full report in a fixed order.

#include <cstdint>
#include <string>
#include <vector>

#include "afb/bounds.hpp"
#include "afb/events.hpp"
#include "afb/trajectory.hpp"

namespace afb {

enum class Outcome {
  pass,
  fail,
  /// The claim's hypothesis never occurs on this trajectory.
  vacuous,
  /// The check was asked about an input outside the claim's domain.
  not_applicable,
};

std::string_view to_string(Outcome outcome);

struct CheckRecord {
  std::string name;
  Outcome outcome = Outcome::pass;
  /// Smallest normalized slack seen (negative on failure).
  double worst_margin = 0.0;
  /// Time (or parameter value, for parameter-only checks) of the worst
  /// margin, or of the first violation when the check fails.
  double location = 0.0;
  std::string detail;

  bool ok() const { return outcome != Outcome::fail; }
};

struct VerificationReport {
  Params params;
  State x0;
  BoundCertificate certificate;
  std::vector<CheckRecord> checks;

  bool all_passed() const;
};

/// Check names, in report order.
inline constexpr const char* kCheckGlobalBounds = "global_bounds";
inline constexpr const char* kCheckExcursionLemma = "excursion_lemma";
inline constexpr const char* kCheckCascadeLowerBounds = "cascade_lower_bounds";
inline constexpr const char* kCheckWDecrease = "W_decrease";
inline constexpr const char* kCheckPropositions = "propositions";
inline constexpr const char* kCheckFuzzedTheorem = "fuzzed_theorem";

/// Number of geometrically spaced levels scanned by the excursion checks.
inline constexpr int kExcursionLevels = 8;

/// x_i <= M_i (1 + 1e-6) at every sample. Throws ProvenanceError when the
/// trajectory was not computed from the certificate's (params, x0).
CheckRecord check_global_bounds(const Trajectory& traj, const BoundCertificate& cert);

/// For every excursion of x1 above a grid level >= L_used lasting at least
/// T0: x1' < -1e-9 a1 and x1 x4 > a1 / a2 on [start + T0, end].
CheckRecord check_excursion_lemma(const Trajectory& traj, const Params& p,
                                  const BoundCertificate& cert);

/// Stage-by-stage lower bounds inside one excursion above L (time measured
/// from the excursion start), with T0 = tau(L):
///   x2 >= l2(L) after delta2, x3 >= l3(L) after delta2 + delta3,
///   x4 >= l4 on [delta2 + delta3 + delta4, T0] and x1 <= U on [0, T0].
/// U is anchored at x1(start), which equals L for a refined up-crossing.
/// Excursions shorter than tau(L) are not applicable.
CheckRecord check_cascade_lower_bounds(const Trajectory& traj, const Params& p, double L,
                                       const Excursion& excursion);

/// W' = a8 x1 (K - x4) at every sample, and W' <= 1e-9 wherever W > gamma.
CheckRecord check_W_decrease(const Trajectory& traj, const Params& p,
                             const BoundCertificate& cert);

/// Monotonicity and limits of tau, l4 and L l4 on a geometric grid, plus the
/// fixed-point residual of tau.
CheckRecord check_propositions(const Params& p);

/// Runs every check above; the cascade check aggregates all qualifying
/// excursions on the same level grid as the excursion check.
VerificationReport verify(const Trajectory& traj, const BoundCertificate& cert);

struct FuzzSettings {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  double horizon = 200.0;
  Tolerances tol;
};

/// Global bounds and propositions over randomly drawn (params, x0) pairs.
/// Batches run in parallel; results are merged in case order.
CheckRecord check_fuzzed_theorem(const FuzzSettings& settings);

}  // namespace afb
