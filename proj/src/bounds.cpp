#include "afb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "afb/errors.hpp"

namespace afb {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

FixedPointConstants fixed_point_constants(const Params& p) {
  const DerivedConstants dc = derive(p);
  return {dc.delta2 + dc.delta3, std::numbers::ln2 / p.alpha(8)};
}

double tau(const Params& p, double L) {
  require_positive(L, "level L");
  const auto [psi1, psi2] = fixed_point_constants(p);
  const double a1 = p.alpha(1);
  // Positive root of a1 t^2 + (L - a1 psi1) t - (psi1 L + psi2) = 0, written
  // as psi1 + 2 psi2 / (S + sqrt(S^2 + 4 a1 psi2)) so that large L does not
  // cancel.
  const double s = L + a1 * psi1;
  return psi1 + 2.0 * psi2 / (s + std::sqrt(s * s + 4.0 * a1 * psi2));
}

double delta4(const Params& p, double L, double t) {
  return std::numbers::ln2 / (p.alpha(8) * window_upper(p, L, t));
}

double window_upper(const Params& p, double L, double t) {
  require_positive(L, "level L");
  if (!(t >= 0.0)) throw DomainError("elapsed time must be nonnegative");
  return L + p.alpha(1) * t;
}

double ell2(const Params& p, double L) {
  require_positive(L, "level L");
  return p.alpha(3) * L / (2.0 * p.alpha(4));
}

double ell3(const Params& p, double L) {
  require_positive(L, "level L");
  return (p.alpha(3) * p.alpha(5)) / (4.0 * p.alpha(4) * p.alpha(6)) * L;
}

double ell4(const Params& p, double L, double T) {
  require_positive(L, "level L");
  require_positive(T, "waiting time T");
  return derive(p).K * L / (8.0 * (L + p.alpha(1) * T));
}

double threshold_map(const Params& p, double L) { return L * ell4(p, L, tau(p, L)); }

double solve_L_star(const Params& p) {
  const double theta = derive(p).theta;
  const auto g = [&](double L) { return threshold_map(p, L) - theta; };

  double lo = 1e-6;
  double hi = 1.0;
  // threshold_map is continuous, strictly increasing, 0 at 0+ and unbounded.
  while (g(lo) > 0.0) {
    hi = lo;
    lo *= 1e-3;
    if (lo < 1e-300) throw DomainError("could not bracket the threshold from below");
  }
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw DomainError("could not bracket the threshold from above");
  }
  // Bisect down to adjacent doubles.
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double L_star = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;

  const double floor = 4.0 * p.alpha(1) / (derive(p).K * p.alpha(2));
  if (!(L_star > floor)) {
    throw DomainError("threshold " + std::to_string(L_star) + " does not exceed 4 a1 / (K a2) = " +
                      std::to_string(floor));
  }
  return L_star;
}

BoundCertificate certificate(const Params& p, const State& x0, std::optional<double> L_override) {
  const double L_star = solve_L_star(p);
  double L_used = L_star;
  if (L_override) {
    if (!std::isfinite(*L_override) || *L_override < L_star) {
      throw CertificateError("L0 = " + std::to_string(*L_override) +
                             " is below the exact threshold L* = " + std::to_string(L_star));
    }
    L_used = *L_override;
  }
  const DerivedConstants dc = derive(p);
  const double T0 = tau(p, L_used);
  const double M1 = std::max(x0.x1(), L_used) + p.alpha(1) * T0;
  const double M2 = std::max(x0.x2(), p.alpha(3) / p.alpha(4) * M1);
  const double M3 = std::max(x0.x3(), p.alpha(5) / p.alpha(6) * M2);
  const double gamma = dc.K + dc.c * M2 + dc.d * M3;
  const double W0 = w_value(p, x0.values());
  return BoundCertificate{
      .params = p,
      .x0 = x0,
      .L_star = L_star,
      .L_used = L_used,
      .T0 = T0,
      .M1 = M1,
      .M2 = M2,
      .M3 = M3,
      .M4 = std::max(W0, gamma),
      .gamma = gamma,
      .W0 = W0,
  };
}

Vec4 growth_envelope(const Params& p, const State& x0, double t) {
  if (!(t >= 0.0)) throw DomainError("envelope time must be nonnegative");
  const double a1 = p.alpha(1), a3 = p.alpha(3), a5 = p.alpha(5), a7 = p.alpha(7);
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  return Vec4{
      x0.x1() + a1 * t,
      x0.x2() + a3 * x0.x1() * t + a1 * a3 / 2.0 * t2,
      x0.x3() + a5 * x0.x2() * t + a3 * a5 * x0.x1() / 2.0 * t2 + a1 * a3 * a5 / 6.0 * t3,
      x0.x4() + a7 * x0.x3() * t + a5 * a7 * x0.x2() / 2.0 * t2 + a3 * a5 * a7 * x0.x1() / 6.0 * t3 +
          a1 * a3 * a5 * a7 / 24.0 * t4,
  };
}

}  // namespace afb
