#include <cmath>
#include <limits>

#include "afb/errors.hpp"
#include "afb/fuzz.hpp"
#include "afb/model.hpp"
#include "doctest.h"

using namespace afb;

namespace {

const Params kExample = Params::oscillatory_example();

void check_exact(const Vec4& got, const Vec4& want) {
  for (std::size_t i = 0; i < 4; ++i) CHECK(got[i] == want[i]);
}

}  // namespace

TEST_CASE("params reject nonpositive and non-finite rates") {
  CHECK_THROWS_AS(Params({1, 0, 1, 1, 1, 1, 1, 1}), InvalidParams);
  CHECK_THROWS_AS(Params({1, 1, 1, -2, 1, 1, 1, 1}), InvalidParams);
  CHECK_THROWS_AS(Params({1, 1, 1, 1, 1, 1, 1, std::numeric_limits<double>::infinity()}), InvalidParams);
  CHECK_THROWS_AS(Params({std::nan(""), 1, 1, 1, 1, 1, 1, 1}), InvalidParams);
  CHECK_NOTHROW(Params({1e-3, 1e3, 1, 1, 1, 1, 1, 1}));
}

TEST_CASE("derived constants of the oscillatory example") {
  const DerivedConstants dc = derive(kExample);
  CHECK(dc.K == doctest::Approx(1.0 / 3.0));
  CHECK(dc.theta == doctest::Approx(1.0 / 30.0));
  CHECK(dc.c == 1.0);
  CHECK(dc.d == 1.0);
  CHECK(dc.delta2 == doctest::Approx(std::log(2.0)));
  CHECK(dc.delta3 == doctest::Approx(std::log(2.0)));
}

TEST_CASE("state validation and clamping") {
  CHECK_THROWS_AS(State(0, -1e-3, 0, 0), InvalidState);
  CHECK_THROWS_AS(State(0, 0, std::nan(""), 0), InvalidState);
  CHECK(State::clamped({-1e-12, 1, 2, 3}, 1e-9) == State(0, 1, 2, 3));
  CHECK_THROWS_AS(State::clamped({-1e-6, 1, 2, 3}, 1e-9), InvalidState);
}

TEST_CASE("vector field") {
  SUBCASE("origin keeps only the constant inflow") {
    check_exact(vector_field(kExample, State()), {1, 0, 0, 0});
  }
  SUBCASE("equilibrium of the example is stationary") {
    const Vec4 f = vector_field(kExample, Vec4{0.1, 1, 1, 1.0 / 3.0});
    for (double v : f) CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("unit state") {
    check_exact(vector_field(kExample, State(1, 1, 1, 1)), {-29, 9, 0, -29});
  }
  SUBCASE("non-finite input is an invalid state") {
    CHECK_THROWS_AS(vector_field(kExample, Vec4{1, std::nan(""), 0, 0}), InvalidState);
  }
}

TEST_CASE("boundary inflow") {
  SUBCASE("origin") {
    const auto in = boundary_inflow(kExample, State());
    REQUIRE(in.size() == 4);
    CHECK(in[0].component == 1);
    CHECK(in[0].rate == 1.0);
    for (std::size_t i = 1; i < 4; ++i) CHECK(in[i].rate == 0.0);
  }
  SUBCASE("two zero components") {
    const auto in = boundary_inflow(kExample, State(0, 2, 0, 5));
    REQUIRE(in.size() == 2);
    CHECK(in[0].component == 1);
    CHECK(in[0].rate == 1.0);
    CHECK(in[1].component == 3);
    CHECK(in[1].rate == 2.0);
  }
  SUBCASE("interior state") { CHECK(boundary_inflow(kExample, State(1, 1, 1, 1)).empty()); }
}

TEST_CASE("boundary inflow points into the orthant for fuzzed boundary states") {
  FuzzRng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const Params p = random_params(rng, kParameterFuzz);
    Vec4 x = random_state(rng, kParameterFuzz).values();
    // Zero out a random nonempty subset of components.
    const int mask = 1 + static_cast<int>(rng.uniform(0, 15));
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) x[i] = 0.0;
    }
    for (const BoundaryInflow& b : boundary_inflow(p, State(x))) {
      CHECK(b.rate >= 0.0);
      if (b.component == 1) CHECK(b.rate == p.alpha(1));
    }
  }
}

TEST_CASE("x1 never grows faster than a1") {
  FuzzRng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Params p = random_params(rng, kParameterFuzz);
    const State x = random_state(rng, {0, 0, 100.0});
    CHECK(vector_field(p, x)[0] <= p.alpha(1));
  }
}

TEST_CASE("equilibrium in closed form") {
  SUBCASE("oscillatory example") {
    const State e = equilibrium(kExample);
    CHECK(e.x1() == doctest::Approx(0.1));
    CHECK(e.x2() == doctest::Approx(1.0));
    CHECK(e.x3() == doctest::Approx(1.0));
    CHECK(e.x4() == doctest::Approx(1.0 / 3.0));
    for (double v : vector_field(kExample, e)) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("all rates one") { CHECK(equilibrium(Params::unit()) == State(1, 1, 1, 1)); }
  SUBCASE("doubling a1") {
    CHECK(equilibrium(Params({2, 1, 1, 1, 1, 1, 1, 1})) == State(2, 2, 2, 1));
  }
}

TEST_CASE("W derivative collapses to a8 x1 (K - x4)") {
  FuzzRng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Params p = random_params(rng, kSimulationFuzz);
    const Vec4 x = random_state(rng, kSimulationFuzz).values();
    const double factored = p.alpha(8) * x[0] * (derive(p).K - x[3]);
    CHECK(w_rate(p, x) == doctest::Approx(factored).epsilon(1e-9).scale(1.0));
  }
  // x1 = 0 makes every term cancel exactly.
  CHECK(w_rate(kExample, Vec4{0.0, 3.0, 7.0, 2.0}) == 0.0);
}

TEST_CASE("equilibrium is stationary for fuzzed params") {
  // Residual measured against the size of the terms that cancel; an absolute
  // 1e-12 is below double resolution once the states reach 1e4.
  FuzzRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Params p = random_params(rng, kParameterFuzz);
    const Vec4 x = equilibrium(p).values();
    const Vec4 f = vector_field(p, x);
    const Vec4 scale{p.alpha(1) + p.alpha(2) * x[0] * x[3], p.alpha(3) * x[0] + p.alpha(4) * x[1],
                     p.alpha(5) * x[1] + p.alpha(6) * x[2], p.alpha(7) * x[2] + p.alpha(8) * x[0] * x[3]};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(f[i]) <= 1e-12 * std::max(1.0, scale[i]));
  }
}
