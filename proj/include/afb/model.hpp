#pragma once

// The four-species antithetic feedback loop
//
//   x1' = a1 - a2 x1 x4        x2' = a3 x1 - a4 x2
//   x4' = a7 x3 - a8 x1 x4     x3' = a5 x2 - a6 x3
//
// where (x1, x4) form the controller and (x2, x3) the regulated cascade.

#include <array>
#include <cstddef>
#include <vector>

namespace afb {

using Vec4 = std::array<double, 4>;

/// The eight rate constants a1..a8. Construction is the single place where
/// positivity and finiteness are validated; every other function assumes a
/// valid Params.
class Params {
 public:
  static constexpr std::size_t kCount = 8;

  explicit Params(const std::array<double, kCount>& alpha);

  /// Rate constant a_k, 1-based to match the usual numbering.
  double alpha(std::size_t k) const { return alpha_[k - 1]; }
  const std::array<double, kCount>& values() const { return alpha_; }

  bool operator==(const Params&) const = default;

  /// a2 = a8 = 30, a3 = 10, all others 1: the standard oscillatory example.
  static Params oscillatory_example();
  static Params unit();

 private:
  std::array<double, kCount> alpha_;
};

struct DerivedConstants {
  double K;       // (a3 a5 a7) / (a4 a6 a8)
  double theta;   // a1 / a2
  double c;       // (a5 a7) / (a4 a6)
  double d;       // a7 / a6
  double delta2;  // ln 2 / a4
  double delta3;  // ln 2 / a6
};

DerivedConstants derive(const Params& p);

/// A point of the nonnegative orthant.
class State {
 public:
  State() : x_{0.0, 0.0, 0.0, 0.0} {}
  /// Throws InvalidState for negative or non-finite components.
  explicit State(const Vec4& x);
  State(double x1, double x2, double x3, double x4) : State(Vec4{x1, x2, x3, x4}) {}

  /// Accepts components in [-tolerance, 0) and clamps them to zero; anything
  /// more negative is rejected. Used when ingesting integrator output.
  static State clamped(const Vec4& x, double tolerance);

  double operator[](std::size_t i) const { return x_[i]; }
  double x1() const { return x_[0]; }
  double x2() const { return x_[1]; }
  double x3() const { return x_[2]; }
  double x4() const { return x_[3]; }
  const Vec4& values() const { return x_; }

  bool operator==(const State&) const = default;

 private:
  Vec4 x_;
};

/// Right-hand side of the system. Defined for any finite 4-vector; throws
/// InvalidState on non-finite input.
Vec4 vector_field(const Params& p, const Vec4& x);
inline Vec4 vector_field(const Params& p, const State& x) { return vector_field(p, x.values()); }

struct BoundaryInflow {
  int component;  // 1-based
  double rate;
};

/// Derivative of every component that sits on the boundary x_i = 0.
std::vector<BoundaryInflow> boundary_inflow(const Params& p, const State& x);

/// The unique positive stationary point, in closed form.
State equilibrium(const Params& p);

/// W = x4 + c x2 + d x3.
double w_value(const Params& p, const Vec4& x);
/// dW/dt evaluated term by term from the vector field.
double w_rate(const Params& p, const Vec4& x);

}  // namespace afb
