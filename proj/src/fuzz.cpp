#include "afb/fuzz.hpp"

#include <cmath>

namespace afb {

double FuzzRng::uniform(double lo, double hi) {
  // 53 random bits -> [0, 1).
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double FuzzRng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

Params random_params(FuzzRng& rng, const FuzzRanges& ranges) {
  std::array<double, Params::kCount> alpha{};
  for (double& a : alpha) a = rng.log_uniform(ranges.alpha_lo, ranges.alpha_hi);
  return Params(alpha);
}

State random_state(FuzzRng& rng, const FuzzRanges& ranges) {
  Vec4 x{};
  for (double& v : x) v = rng.uniform(0.0, ranges.x0_hi);
  return State(x);
}

std::vector<FuzzCase> fuzz_cases(std::uint64_t seed, std::size_t count, const FuzzRanges& ranges) {
  FuzzRng rng(seed);
  std::vector<FuzzCase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Params p = random_params(rng, ranges);
    State x0 = random_state(rng, ranges);
    out.push_back({p, x0});
  }
  return out;
}

}  // namespace afb
