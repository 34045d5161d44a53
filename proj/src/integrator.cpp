#include "afb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "afb/errors.hpp"

namespace afb {

namespace {

// Dormand-Prince 5(4) tableau (autonomous form, so the nodes c_i are unused).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool all_finite(const Vec4& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double rms_scaled(const Vec4& v, const Vec4& y, const Tolerances& tol) {
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double r = v[k] / (tol.abs + tol.rel * std::abs(y[k]));
    sum += r * r;
  }
  return std::sqrt(sum / 4.0);
}

double initial_step(const RightHandSide& rhs, const Vec4& y0, const Vec4& f0, double horizon,
                    const Tolerances& tol) {
  const double d0 = rms_scaled(y0, y0, tol);
  const double d1n = rms_scaled(f0, y0, tol);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, horizon);
  Vec4 y1{};
  for (std::size_t k = 0; k < 4; ++k) y1[k] = y0[k] + h0 * f0[k];
  const Vec4 f1 = rhs(y1);
  Vec4 df{};
  for (std::size_t k = 0; k < 4; ++k) df[k] = f1[k] - f0[k];
  const double d2 = rms_scaled(df, y0, tol) / h0;
  const double dmax = std::max(d1n, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, horizon});
}

}  // namespace

Trajectory integrate(const Params& p, const State& x0, double horizon,
                     const IntegrateOptions& options) {
  return integrate_rhs(p, [&p](const Vec4& y) { return vector_field(p, y); }, x0, horizon, options);
}

Trajectory integrate_rhs(const Params& p, const RightHandSide& rhs, const State& x0,
                         double horizon, const IntegrateOptions& options) {
  const Tolerances& tol = options.tol;
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (!(tol.rel > 0.0 && tol.rel < 1.0 && tol.abs > 0.0 && tol.abs < 1.0)) {
    throw DomainError("tolerances must lie in (0, 1)");
  }

  std::vector<double> times{0.0};
  std::vector<State> states{x0};
  std::vector<Trajectory::Segment> segments;
  double estimated_error = 0.0;

  Vec4 y = x0.values();
  Vec4 k1 = rhs(y);
  if (!all_finite(k1)) throw IntegrationError("non-finite derivative at t = 0", 0.0);

  double t = 0.0;
  double h = initial_step(rhs, y, k1, horizon, tol);
  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < horizon) {
    if (++steps > options.max_steps) {
      throw IntegrationError("exceeded " + std::to_string(options.max_steps) + " steps", t);
    }
    const bool final_step = t + 1.001 * h >= horizon;
    if (final_step) h = horizon - t;
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
    }

    Vec4 stage{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y_new{}, err{};
    for (std::size_t i = 0; i < 4; ++i) stage[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(stage);
    for (std::size_t i = 0; i < 4; ++i) stage[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(stage);
    for (std::size_t i = 0; i < 4; ++i) stage[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(stage);
    for (std::size_t i = 0; i < 4; ++i) {
      stage[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    k5 = rhs(stage);
    for (std::size_t i = 0; i < 4; ++i) {
      stage[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    k6 = rhs(stage);
    for (std::size_t i = 0; i < 4; ++i) {
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    if (!all_finite(y_new)) throw IntegrationError("non-finite state", t);
    k7 = rhs(y_new);

    double err_norm = 0.0;
    double err_abs = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = tol.abs + tol.rel * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err_norm = std::max(err_norm, std::abs(err[i]) / scale);
      err_abs = std::max(err_abs, std::abs(err[i]));
    }
    if (!std::isfinite(err_norm)) throw IntegrationError("non-finite error estimate", t);

    const bool undershoot =
        std::any_of(y_new.begin(), y_new.end(), [&](double v) { return v < -tol.abs; });
    if (undershoot) {
      h *= 0.5;
      last_rejected = true;
      continue;
    }

    if (err_norm > 1.0) {
      const double factor = std::max(kMinFactor, kSafety * std::pow(err_norm, -0.2));
      h *= std::min(1.0, factor);
      last_rejected = true;
      continue;
    }

    // Accepted: build the dense-output polynomial in monomial form from
    // y(s) = r1 + s (r2 + (1-s)(r3 + s (r4 + (1-s) r5))).
    Trajectory::Segment seg{};
    for (std::size_t i = 0; i < 4; ++i) {
      const double r1 = y[i];
      const double r2 = y_new[i] - y[i];
      const double r3 = h * k1[i] - r2;
      const double r4 = r2 - h * k7[i] - r3;
      const double r5 =
          h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      seg[0][i] = r1;
      seg[1][i] = r2 + r3;
      seg[2][i] = -r3 + r4 + r5;
      seg[3][i] = -r4 - 2.0 * r5;
      seg[4][i] = r5;
    }

    const double t_new = final_step ? horizon : t + h;
    const State accepted = State::clamped(y_new, tol.abs);
    times.push_back(t_new);
    states.push_back(accepted);
    segments.push_back(seg);
    estimated_error += err_abs;

    t = t_new;
    y = accepted.values();
    k1 = accepted.values() == y_new ? k7 : rhs(y);

    double factor = err_norm == 0.0 ? kMaxFactor : kSafety * std::pow(err_norm, -0.2);
    factor = std::clamp(factor, kMinFactor, kMaxFactor);
    if (last_rejected) factor = std::min(factor, 1.0);
    last_rejected = false;
    h *= factor;
  }

  return Trajectory(p, x0, tol, std::move(times), std::move(states), std::move(segments),
                    estimated_error);
}

}  // namespace afb
