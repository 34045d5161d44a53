#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "afb/model.hpp"

namespace afb {

/// Deterministic random source for property tests and fuzz batches. Uses
/// its own mapping to doubles so draws do not depend on the standard
/// library's distribution implementations.
class FuzzRng {
 public:
  explicit FuzzRng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

struct FuzzRanges {
  double alpha_lo;
  double alpha_hi;
  double x0_hi;
};

/// Rate constants for anything that integrates the system.
inline constexpr FuzzRanges kSimulationFuzz{0.1, 10.0, 2.0};
/// Rate constants for closed-form checks only.
inline constexpr FuzzRanges kParameterFuzz{1e-2, 1e2, 2.0};

/// a_k log-uniform in [alpha_lo, alpha_hi].
Params random_params(FuzzRng& rng, const FuzzRanges& ranges);
/// x_i uniform in [0, x0_hi].
State random_state(FuzzRng& rng, const FuzzRanges& ranges);

struct FuzzCase {
  Params params;
  State x0;
};

std::vector<FuzzCase> fuzz_cases(std::uint64_t seed, std::size_t count, const FuzzRanges& ranges);

}  // namespace afb
