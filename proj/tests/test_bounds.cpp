#include <cmath>
#include <vector>

#include "afb/bounds.hpp"
#include "afb/errors.hpp"
#include "afb/fuzz.hpp"
#include "doctest.h"

using namespace afb;

namespace {

const Params kExample = Params::oscillatory_example();

// Independent tau: iterate the contraction t -> psi1 + psi2 / (L + a1 t)
// from t = psi1 until it stops moving.
double tau_by_iteration(const Params& p, double L) {
  const double psi1 = std::log(2.0) / p.alpha(4) + std::log(2.0) / p.alpha(6);
  const double psi2 = std::log(2.0) / p.alpha(8);
  double t = psi1;
  for (int i = 0; i < 10000; ++i) {
    const double next = psi1 + psi2 / (L + p.alpha(1) * t);
    if (next == t) break;
    t = next;
  }
  return t;
}

// Independent L*: plain bisection on L -> L * l4(L, tau(L)) - theta with the
// product written out directly from the cascade constants.
double L_star_by_bisection(const Params& p) {
  const double K = p.alpha(3) * p.alpha(5) * p.alpha(7) / (p.alpha(4) * p.alpha(6) * p.alpha(8));
  const double theta = p.alpha(1) / p.alpha(2);
  const auto g = [&](double L) {
    const double T = tau_by_iteration(p, L);
    return L * K * L / (8.0 * (L + p.alpha(1) * T)) - theta;
  };
  double lo = 1e-12, hi = 1.0;
  while (g(hi) < 0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_grid() {
  std::vector<double> out;
  for (int k = -30; k <= 60; ++k) out.push_back(std::pow(10.0, k / 10.0));
  return out;
}

}  // namespace

TEST_CASE("waiting time tau") {
  SUBCASE("matches the fixed-point iteration at L = 1.75") {
    CHECK(tau(kExample, 1.75) == doctest::Approx(1.3936440818316584).epsilon(1e-14));
    CHECK(tau(kExample, 1.75) == doctest::Approx(tau_by_iteration(kExample, 1.75)).epsilon(1e-14));
  }
  SUBCASE("tends to 2 ln 2 for large L") {
    CHECK(tau(kExample, 1e9) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("solves its own fixed-point equation") {
    for (double L : log_grid()) {
      const double T = tau(kExample, L);
      const double rhs = 2.0 * std::log(2.0) + std::log(2.0) / (30.0 * (L + T));
      CHECK(std::abs(T - rhs) <= 1e-12 * T);
    }
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(tau(kExample, 0.0), DomainError);
    CHECK_THROWS_AS(tau(kExample, -1.0), DomainError);
  }
}

TEST_CASE("cascade constants of the example") {
  CHECK(ell2(kExample, 2.0) == doctest::Approx(10.0));
  CHECK(ell3(kExample, 2.0) == doctest::Approx(5.0));
  CHECK(ell4(kExample, 2.0, 1.3936) == doctest::Approx(0.024556027031274553).epsilon(1e-12));
  CHECK(delta4(kExample, 1.75, 0.0) == doctest::Approx(std::log(2.0) / (30.0 * 1.75)));
}

TEST_CASE("x1 window ceiling") {
  CHECK(window_upper(kExample, 1.75, 1.3936) == doctest::Approx(3.1436));
  CHECK(window_upper(kExample, 1.75, 0.0) == 1.75);
  CHECK(window_upper(kExample, 5.0, 2.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(window_upper(kExample, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(window_upper(kExample, 1.0, -1.0), DomainError);
}

TEST_CASE("exact threshold L*") {
  const double Ls = solve_L_star(kExample);
  const DerivedConstants dc = derive(kExample);
  CHECK(Ls == doctest::Approx(L_star_by_bisection(kExample)).epsilon(1e-12));
  CHECK(Ls == doctest::Approx(1.5293174882953908).epsilon(1e-12));
  CHECK(Ls > 4.0 * 1.0 / (dc.K * 30.0));
  CHECK(std::abs(threshold_map(kExample, Ls) - dc.theta) <= 1e-12 * dc.theta);
}

TEST_CASE("L* agrees with the independent oracle for fuzzed params") {
  FuzzRng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Params p = random_params(rng, kParameterFuzz);
    const double Ls = solve_L_star(p);
    const DerivedConstants dc = derive(p);
    CHECK(Ls == doctest::Approx(L_star_by_bisection(p)).epsilon(1e-9));
    CHECK(std::abs(threshold_map(p, Ls) - dc.theta) <= 1e-12 * dc.theta);
    CHECK(Ls > 4.0 * p.alpha(1) / (dc.K * p.alpha(2)));
  }
}

TEST_CASE("certificate") {
  SUBCASE("example from the origin at L = 1.75") {
    const BoundCertificate c = certificate(kExample, State(), 1.75);
    CHECK(c.L_used == 1.75);
    CHECK(c.T0 == doctest::Approx(1.3936).epsilon(1e-4));
    CHECK(c.M1 == doctest::Approx(3.1436).epsilon(1e-4));
    CHECK(c.M2 == doctest::Approx(31.4364).epsilon(1e-5));
    CHECK(c.M3 == doctest::Approx(31.4364).epsilon(1e-5));
    CHECK(c.gamma == doctest::Approx(63.2062).epsilon(1e-5));
    CHECK(c.M4 == doctest::Approx(63.2062).epsilon(1e-5));
    CHECK(c.W0 == 0.0);
  }
  SUBCASE("default uses the exact threshold") {
    const BoundCertificate c = certificate(kExample, State());
    CHECK(c.L_used == c.L_star);
    CHECK(c.T0 == doctest::Approx(1.3941974867122624).epsilon(1e-12));
    CHECK(c.M1 == doctest::Approx(2.9235149750076532).epsilon(1e-12));
    CHECK(c.gamma == doctest::Approx(58.8036328334864).epsilon(1e-12));
  }
  SUBCASE("large x1(0) dominates M1") {
    const BoundCertificate c = certificate(kExample, State(5, 0, 0, 0), 1.75);
    CHECK(c.M1 == doctest::Approx(6.3936).epsilon(1e-4));
  }
  SUBCASE("override below L* is rejected") {
    CHECK_THROWS_AS(certificate(kExample, State(), 1.0), CertificateError);
    CHECK_THROWS_AS(certificate(kExample, State(), std::nan("")), CertificateError);
  }
}

TEST_CASE("certificate is monotone in x0") {
  FuzzRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Params p = random_params(rng, kSimulationFuzz);
    const State a = random_state(rng, kSimulationFuzz);
    Vec4 bigger = a.values();
    bigger[static_cast<std::size_t>(rng.uniform(0, 4)) % 4] += rng.uniform(0, 3);
    const BoundCertificate ca = certificate(p, a);
    const BoundCertificate cb = certificate(p, State(bigger));
    CHECK(cb.M1 >= ca.M1);
    CHECK(cb.M2 >= ca.M2);
    CHECK(cb.M3 >= ca.M3);
    CHECK(cb.M4 >= ca.M4);
  }
}

TEST_CASE("growth envelope") {
  SUBCASE("t = 0 is the initial state") {
    const State x0(0.5, 1.5, 2.5, 3.5);
    const Vec4 e = growth_envelope(kExample, x0, 0.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(e[i] == x0[i]);
  }
  SUBCASE("from the origin at t = 2") {
    const Vec4 e = growth_envelope(kExample, State(), 2.0);
    CHECK(e[0] == doctest::Approx(2.0));
    CHECK(e[1] == doctest::Approx(20.0));
    CHECK(e[2] == doctest::Approx(40.0 / 3.0));
    CHECK(e[3] == doctest::Approx(20.0 / 3.0));
  }
  SUBCASE("domain") { CHECK_THROWS_AS(growth_envelope(kExample, State(), -1.0), DomainError); }
}

TEST_CASE("monotonicity on a logarithmic grid") {
  FuzzRng rng(17);
  std::vector<Params> sets{kExample, Params::unit()};
  for (int i = 0; i < 20; ++i) sets.push_back(random_params(rng, kParameterFuzz));
  const auto grid = log_grid();
  for (const Params& p : sets) {
    const FixedPointConstants fc = fixed_point_constants(p);
    const double K = derive(p).K;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double a = grid[i], b = grid[i + 1];
      CHECK(tau(p, a) > fc.psi1);
      CHECK(tau(p, b) < tau(p, a));
      CHECK(ell4(p, a, tau(p, a)) < K / 8.0);
      CHECK(ell4(p, b, tau(p, b)) > ell4(p, a, tau(p, a)));
      CHECK(threshold_map(p, b) > threshold_map(p, a));
    }
  }
}
