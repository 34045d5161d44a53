#include "afb/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "afb/errors.hpp"

namespace afb {

Params::Params(const std::array<double, kCount>& alpha) : alpha_(alpha) {
  for (std::size_t k = 0; k < kCount; ++k) {
    if (!std::isfinite(alpha_[k]) || alpha_[k] <= 0.0) {
      throw InvalidParams("alpha" + std::to_string(k + 1) +
                          " must be positive and finite, got " + std::to_string(alpha_[k]));
    }
  }
}

Params Params::oscillatory_example() { return Params({1.0, 30.0, 10.0, 1.0, 1.0, 1.0, 1.0, 30.0}); }

Params Params::unit() { return Params({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}); }

DerivedConstants derive(const Params& p) {
  const double ln2 = std::numbers::ln2;
  return DerivedConstants{
      .K = (p.alpha(3) * p.alpha(5) * p.alpha(7)) / (p.alpha(4) * p.alpha(6) * p.alpha(8)),
      .theta = p.alpha(1) / p.alpha(2),
      .c = (p.alpha(5) * p.alpha(7)) / (p.alpha(4) * p.alpha(6)),
      .d = p.alpha(7) / p.alpha(6),
      .delta2 = ln2 / p.alpha(4),
      .delta3 = ln2 / p.alpha(6),
  };
}

State::State(const Vec4& x) : x_(x) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(x_[i]) || x_[i] < 0.0) {
      throw InvalidState("x" + std::to_string(i + 1) + " must be nonnegative and finite, got " +
                         std::to_string(x_[i]));
    }
  }
}

State State::clamped(const Vec4& x, double tolerance) {
  Vec4 y = x;
  for (double& v : y) {
    if (v < 0.0 && v >= -tolerance) v = 0.0;
  }
  return State(y);
}

Vec4 vector_field(const Params& p, const Vec4& x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidState("non-finite state passed to vector_field");
  }
  const double annihilation = x[0] * x[3];
  return Vec4{
      p.alpha(1) - p.alpha(2) * annihilation,
      p.alpha(3) * x[0] - p.alpha(4) * x[1],
      p.alpha(5) * x[1] - p.alpha(6) * x[2],
      p.alpha(7) * x[2] - p.alpha(8) * annihilation,
  };
}

std::vector<BoundaryInflow> boundary_inflow(const Params& p, const State& x) {
  const Vec4 f = vector_field(p, x);
  std::vector<BoundaryInflow> out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i] == 0.0) out.push_back({static_cast<int>(i) + 1, f[i]});
  }
  return out;
}

State equilibrium(const Params& p) {
  // Stationarity is triangular: x4' = 0 and x1' = 0 give a7 x3 = a8 a1 / a2,
  // then the linear cascade fixes x2 and x1, and x1' = 0 fixes x4.
  const double x3 = (p.alpha(8) * p.alpha(1)) / (p.alpha(7) * p.alpha(2));
  const double x2 = (p.alpha(6) / p.alpha(5)) * x3;
  const double x1 = (p.alpha(4) / p.alpha(3)) * x2;
  const double x4 = p.alpha(1) / (p.alpha(2) * x1);
  return State(x1, x2, x3, x4);
}

double w_value(const Params& p, const Vec4& x) {
  const DerivedConstants dc = derive(p);
  return x[3] + dc.c * x[1] + dc.d * x[2];
}

double w_rate(const Params& p, const Vec4& x) {
  const DerivedConstants dc = derive(p);
  const Vec4 f = vector_field(p, x);
  return f[3] + dc.c * f[1] + dc.d * f[2];
}

}  // namespace afb
