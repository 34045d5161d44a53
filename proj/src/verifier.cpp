#include "afb/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "afb/errors.hpp"
#include "afb/fuzz.hpp"
#include "afb/integrator.hpp"

namespace afb {

namespace {

constexpr double kBoundRelTol = 1e-6;
constexpr double kStrictFactor = 1e-9;  // "< 0" is tested as < -1e-9 a1
constexpr double kCascadeRelTol = 1e-9;
constexpr double kWRateTol = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kFixedPointTol = 1e-12;
constexpr double kLimitTol = 1e-6;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Points at which an interval claim is evaluated: both ends, every sample in
// between and the midpoint of each resulting gap.
std::vector<double> probe_times(const Trajectory& traj, double a, double b) {
  std::vector<double> knots{a};
  const auto& times = traj.times();
  for (auto it = std::upper_bound(times.begin(), times.end(), a); it != times.end() && *it < b; ++it) {
    knots.push_back(*it);
  }
  if (b > a) knots.push_back(b);
  std::vector<double> out;
  out.reserve(2 * knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    out.push_back(knots[i]);
    if (i + 1 < knots.size()) out.push_back(0.5 * (knots[i] + knots[i + 1]));
  }
  return out;
}

// Tracks the worst margin and the first violation of a pointwise claim.
struct MarginTracker {
  double worst = kInf;
  double worst_at = 0.0;
  bool failed = false;
  double first_failure_at = kInf;
  std::string failure;

  void observe(double margin, double t, bool violated, const std::string& what = {}) {
    if (margin < worst) {
      worst = margin;
      worst_at = t;
    }
    if (violated && t < first_failure_at) {
      failed = true;
      first_failure_at = t;
      failure = what;
    }
  }

  void merge(const MarginTracker& other) {
    if (other.worst < worst) {
      worst = other.worst;
      worst_at = other.worst_at;
    }
    if (other.failed && other.first_failure_at < first_failure_at) {
      failed = true;
      first_failure_at = other.first_failure_at;
      failure = other.failure;
    }
  }
};

std::vector<double> level_grid(double L_used, double x1_max) {
  std::vector<double> levels;
  const double ratio = std::pow(x1_max / L_used, 1.0 / kExcursionLevels);
  for (int k = 0; k < kExcursionLevels; ++k) levels.push_back(L_used * std::pow(ratio, k));
  return levels;
}

double max_x1(const Trajectory& traj) {
  double m = 0.0;
  for (const State& s : traj.states()) m = std::max(m, s.x1());
  return m;
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::vacuous: return "vacuous";
    case Outcome::not_applicable: return "not_applicable";
  }
  return "?";
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.ok(); });
}

CheckRecord check_global_bounds(const Trajectory& traj, const BoundCertificate& cert) {
  if (!(traj.params() == cert.params) || !(traj.initial_state() == cert.x0)) {
    throw ProvenanceError("trajectory and certificate were computed from different inputs");
  }
  const std::array<double, 4> M{cert.M1, cert.M2, cert.M3, cert.M4};
  MarginTracker tracker;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double x = traj.state(i)[k];
      const bool violated = x > M[k] + kBoundRelTol * M[k];
      tracker.observe((M[k] - x) / M[k], traj.time(i), violated,
                      format("x%zu = %.10g exceeds M%zu = %.10g", k + 1, x, k + 1, M[k]));
    }
  }
  CheckRecord rec{.name = kCheckGlobalBounds};
  rec.worst_margin = tracker.worst;
  if (tracker.failed) {
    rec.outcome = Outcome::fail;
    rec.location = tracker.first_failure_at;
    rec.detail = format("first violation at t = %.10g: ", tracker.first_failure_at) + tracker.failure;
  } else {
    rec.location = tracker.worst_at;
    rec.detail = format("%zu samples below (M1, M2, M3, M4) = (%.6g, %.6g, %.6g, %.6g)",
                        traj.size(), cert.M1, cert.M2, cert.M3, cert.M4);
  }
  return rec;
}

CheckRecord check_excursion_lemma(const Trajectory& traj, const Params& p,
                                  const BoundCertificate& cert) {
  CheckRecord rec{.name = kCheckExcursionLemma};
  const double theta = derive(p).theta;
  const double eps = kStrictFactor * p.alpha(1);
  const double x1_max = max_x1(traj);

  if (!(x1_max > cert.L_used)) {
    rec.outcome = Outcome::vacuous;
    rec.worst_margin = (cert.L_used - x1_max) / cert.L_used;
    rec.detail = format("x1 never exceeds L = %.10g (max %.10g)", cert.L_used, x1_max);
    return rec;
  }

  MarginTracker tracker;
  std::size_t qualifying = 0;
  double longest = 0.0;
  for (double level : level_grid(cert.L_used, x1_max)) {
    for (const Excursion& ex : excursions_above(traj, level)) {
      longest = std::max(longest, ex.duration());
      if (ex.duration() < cert.T0) continue;
      ++qualifying;
      for (double t : probe_times(traj, ex.start + cert.T0, ex.end)) {
        const Vec4 x = traj.evaluate(t);
        const double rate = vector_field(p, x)[0];
        const double product = x[0] * x[3];
        const double margin = std::min(-rate / p.alpha(1), (product - theta) / theta);
        const bool violated = !(rate < -eps) || !(product > theta);
        tracker.observe(margin, t, violated,
                        format("level %.6g: x1' = %.6g, x1 x4 = %.6g (theta = %.6g)", level, rate,
                               product, theta));
      }
    }
  }

  if (qualifying == 0) {
    rec.outcome = Outcome::vacuous;
    rec.worst_margin = 0.0;
    rec.detail = format("no excursion above L = %.10g lasts T0 = %.10g (longest %.10g)",
                        cert.L_used, cert.T0, longest);
    return rec;
  }
  rec.worst_margin = tracker.worst;
  if (tracker.failed) {
    rec.outcome = Outcome::fail;
    rec.location = tracker.first_failure_at;
    rec.detail = format("violation at t = %.10g: ", tracker.first_failure_at) + tracker.failure;
  } else {
    rec.location = tracker.worst_at;
    rec.detail = format("%zu excursions lasting >= T0 = %.10g; x1 decreasing after T0 in all "
                        "(event tolerance %.1e on excursion starts)",
                        qualifying, cert.T0, kEventTimeTolerance);
  }
  return rec;
}

namespace {

MarginTracker cascade_tracker(const Trajectory& traj, const Params& p, double L,
                              const Excursion& ex) {
  const DerivedConstants dc = derive(p);
  const double T0 = tau(p, L);
  const double duration = ex.duration();
  const double anchor = std::max(L, traj.evaluate(ex.start)[0]);
  const double upper = anchor + p.alpha(1) * T0;
  const double l2 = ell2(p, L);
  const double l3 = ell3(p, L);
  const double l4 = p.alpha(7) * l3 / (2.0 * p.alpha(8) * upper);
  const double d4 = std::numbers::ln2 / (p.alpha(8) * upper);
  const double window = std::min(T0, duration);

  MarginTracker tracker;
  const auto lower = [&](std::size_t k, double bound, double from, double to, const char* name) {
    if (from > to) return;
    for (double s : probe_times(traj, ex.start + from, ex.start + to)) {
      const double x = traj.evaluate(s)[k];
      tracker.observe((x - bound) / bound, s, x < bound * (1.0 - kCascadeRelTol),
                      format("%s = %.10g below %.10g at %.6g after the excursion start", name, x,
                             bound, s - ex.start));
    }
  };
  lower(1, l2, dc.delta2, duration, "x2");
  lower(2, l3, dc.delta2 + dc.delta3, duration, "x3");
  lower(3, l4, dc.delta2 + dc.delta3 + d4, window, "x4");
  for (double s : probe_times(traj, ex.start, ex.start + window)) {
    const double x = traj.evaluate(s)[0];
    tracker.observe((upper - x) / upper, s, x > upper * (1.0 + kCascadeRelTol),
                    format("x1 = %.10g above U = %.10g", x, upper));
  }
  return tracker;
}

// Excursions refined to the event tolerance may come out a hair short of an
// exact target duration.
constexpr double kDurationSlack = 10 * kEventTimeTolerance;

}  // namespace

CheckRecord check_cascade_lower_bounds(const Trajectory& traj, const Params& p, double L,
                                       const Excursion& excursion) {
  CheckRecord rec{.name = kCheckCascadeLowerBounds};
  const double T0 = tau(p, L);
  if (excursion.duration() + kDurationSlack < T0) {
    rec.outcome = Outcome::not_applicable;
    rec.location = excursion.start;
    rec.detail = format("excursion lasts %.10g < tau(L) = %.10g", excursion.duration(), T0);
    return rec;
  }
  const MarginTracker tracker = cascade_tracker(traj, p, L, excursion);
  rec.worst_margin = tracker.worst;
  if (tracker.failed) {
    rec.outcome = Outcome::fail;
    rec.location = tracker.first_failure_at;
    rec.detail = tracker.failure;
  } else {
    rec.location = tracker.worst_at;
    rec.detail = format("all four stage bounds hold on the excursion [%.10g, %.10g] above %.10g",
                        excursion.start, excursion.end, L);
  }
  return rec;
}

CheckRecord check_W_decrease(const Trajectory& traj, const Params& p,
                             const BoundCertificate& cert) {
  const DerivedConstants dc = derive(p);
  CheckRecord rec{.name = kCheckWDecrease};
  MarginTracker tracker;
  double worst_identity = 0.0;
  std::size_t above = 0;
  double w_max = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec4& x = traj.state(i).values();
    const double t = traj.time(i);
    const double rate = w_rate(p, x);
    const double factored = p.alpha(8) * x[0] * (dc.K - x[3]);
    // Sum of the magnitudes that cancel in W'; the identity is checked
    // relative to it.
    const double scale = p.alpha(7) * x[2] + p.alpha(8) * x[0] * x[3] +
                         dc.c * (p.alpha(3) * x[0] + p.alpha(4) * x[1]) +
                         dc.d * (p.alpha(5) * x[1] + p.alpha(6) * x[2]);
    const double residual = std::abs(rate - factored) / std::max(1.0, scale);
    worst_identity = std::max(worst_identity, residual);
    if (residual > kIdentityTol) {
      tracker.observe(-residual, t, true, format("W' = %.17g but a8 x1 (K - x4) = %.17g", rate, factored));
    }
    const double w = w_value(p, x);
    w_max = std::max(w_max, w);
    if (w > cert.gamma) {
      ++above;
      tracker.observe(-rate, t, rate > kWRateTol,
                      format("W = %.10g > gamma = %.10g but W' = %.6g", w, cert.gamma, rate));
    }
  }
  if (tracker.failed) {
    rec.outcome = Outcome::fail;
    rec.worst_margin = tracker.worst;
    rec.location = tracker.first_failure_at;
    rec.detail = tracker.failure;
  } else if (above == 0) {
    rec.worst_margin = (cert.gamma - w_max) / cert.gamma;
    rec.detail = format("identity holds (worst scaled residual %.3g); W stays below gamma = %.10g",
                        worst_identity, cert.gamma);
  } else {
    rec.worst_margin = tracker.worst;
    rec.location = tracker.worst_at;
    rec.detail = format("identity holds (worst scaled residual %.3g); W' <= 0 at %zu samples "
                        "with W > gamma",
                        worst_identity, above);
  }
  return rec;
}

CheckRecord check_propositions(const Params& p) {
  CheckRecord rec{.name = kCheckPropositions};
  const DerivedConstants dc = derive(p);
  const auto [psi1, psi2] = fixed_point_constants(p);
  const double a1 = p.alpha(1);
  const double sup_l4 = dc.K / 8.0;

  std::vector<double> grid;
  for (int k = -30; k <= 60; ++k) grid.push_back(std::pow(10.0, k / 10.0));

  std::vector<std::string> failures;
  double worst = kInf;
  double worst_at = 0.0;
  const auto fail = [&](std::string msg, double at) {
    if (failures.empty()) rec.location = at;
    failures.push_back(std::move(msg));
  };

  double prev_tau = 0.0, prev_l4 = 0.0, prev_map = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double L = grid[i];
    const double t = tau(p, L);
    const double l4 = ell4(p, L, t);
    const double map = L * l4;
    if (!(t > psi1)) fail(format("tau(%.3g) = %.17g not above delta2 + delta3", L, t), L);
    if (!(l4 < sup_l4)) fail(format("l4 at L = %.3g reaches K/8", L), L);
    if (i > 0) {
      if (!(t < prev_tau)) fail(format("tau not decreasing at L = %.3g", L), L);
      if (!(l4 > prev_l4)) fail(format("l4 not increasing at L = %.3g", L), L);
      if (!(map > prev_map)) fail(format("L l4 not increasing at L = %.3g", L), L);
      const double rel_step = (prev_tau - t) / prev_tau;
      if (rel_step < worst) {
        worst = rel_step;
        worst_at = L;
      }
    }
    prev_tau = t;
    prev_l4 = l4;
    prev_map = map;
  }

  // Fixed-point residual on 20 points spread over the grid.
  for (std::size_t j = 0; j < 20; ++j) {
    const double L = grid[j * (grid.size() - 1) / 19];
    const double t = tau(p, L);
    const double residual = std::abs(t - (psi1 + psi2 / (L + a1 * t))) / t;
    if (residual > kFixedPointTol) fail(format("fixed-point residual %.3g at L = %.3g", residual, L), L);
  }

  // Limits, probed far enough out that a1 tau / L is negligible.
  const double L_far = 1e9 * std::max(1.0, a1 * psi1);
  const double tau_far = tau(p, L_far);
  if (!(std::abs(tau_far - psi1) <= kLimitTol)) {
    fail(format("|tau - (delta2 + delta3)| = %.3g at L = %.3g", std::abs(tau_far - psi1), L_far), L_far);
  }
  const double l4_gap = (sup_l4 - ell4(p, L_far, tau_far)) / sup_l4;
  if (!(l4_gap <= kLimitTol)) fail(format("(K/8 - l4) / (K/8) = %.3g at L = %.3g", l4_gap, L_far), L_far);

  // The threshold equation is bracket-solvable with the required residual.
  try {
    const double L_star = solve_L_star(p);
    const double residual = std::abs(threshold_map(p, L_star) - dc.theta) / dc.theta;
    if (residual > kFixedPointTol) fail(format("threshold residual %.3g", residual), L_star);
  } catch (const Error& e) {
    fail(std::string("threshold solve failed: ") + e.what(), 0.0);
  }

  rec.worst_margin = worst;
  if (!failures.empty()) {
    rec.outcome = Outcome::fail;
    rec.detail = failures.front();
    if (failures.size() > 1) rec.detail += format(" (+%zu more)", failures.size() - 1);
  } else {
    rec.location = worst_at;
    rec.detail = format("%zu grid levels in [1e-3, 1e6]; limits probed at L = %.3g", grid.size(), L_far);
  }
  return rec;
}

VerificationReport verify(const Trajectory& traj, const BoundCertificate& cert) {
  const Params& p = cert.params;
  VerificationReport report{.params = p, .x0 = cert.x0, .certificate = cert, .checks = {}};
  report.checks.push_back(check_global_bounds(traj, cert));
  report.checks.push_back(check_excursion_lemma(traj, p, cert));

  CheckRecord cascade{.name = kCheckCascadeLowerBounds, .outcome = Outcome::not_applicable};
  cascade.detail = "no excursion lasts tau(L) at any grid level";
  const double x1_max = max_x1(traj);
  if (x1_max > cert.L_used) {
    MarginTracker merged;
    std::size_t checked = 0;
    for (double level : level_grid(cert.L_used, x1_max)) {
      const double T = tau(p, level);
      for (const Excursion& ex : excursions_above(traj, level)) {
        if (ex.duration() + kDurationSlack < T) continue;
        ++checked;
        merged.merge(cascade_tracker(traj, p, level, ex));
      }
    }
    if (checked > 0) {
      cascade.worst_margin = merged.worst;
      if (merged.failed) {
        cascade.outcome = Outcome::fail;
        cascade.location = merged.first_failure_at;
        cascade.detail = merged.failure;
      } else {
        cascade.outcome = Outcome::pass;
        cascade.location = merged.worst_at;
        cascade.detail = format("stage bounds hold in %zu excursions", checked);
      }
    }
  }
  report.checks.push_back(cascade);
  report.checks.push_back(check_W_decrease(traj, p, cert));
  report.checks.push_back(check_propositions(p));
  return report;
}

CheckRecord check_fuzzed_theorem(const FuzzSettings& settings) {
  const std::vector<FuzzCase> cases = fuzz_cases(settings.seed, settings.count, kSimulationFuzz);
  std::vector<CheckRecord> results(cases.size());

  const auto run_case = [&](std::size_t i) {
    const FuzzCase& c = cases[i];
    try {
      const Trajectory traj = integrate(c.params, c.x0, settings.horizon, {.tol = settings.tol});
      CheckRecord props = check_propositions(c.params);
      if (!props.ok()) return props;
      return check_global_bounds(traj, certificate(c.params, c.x0));
    } catch (const Error& e) {
      return CheckRecord{.name = kCheckFuzzedTheorem, .outcome = Outcome::fail, .detail = e.what()};
    }
  };

  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), cases.size()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < cases.size(); i += workers) results[i] = run_case(i);
    }));
  }
  for (auto& j : jobs) j.get();

  CheckRecord rec{.name = kCheckFuzzedTheorem};
  rec.worst_margin = kInf;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].worst_margin < rec.worst_margin) {
      rec.worst_margin = results[i].worst_margin;
      rec.location = static_cast<double>(i);
    }
    if (!results[i].ok()) {
      rec.outcome = Outcome::fail;
      rec.location = static_cast<double>(i);
      rec.detail = format("case %zu (seed %llu): ", i, static_cast<unsigned long long>(settings.seed)) +
                   results[i].detail;
      rec.worst_margin = results[i].worst_margin;
      return rec;
    }
  }
  rec.detail = format("%zu random (params, x0) pairs bounded to horizon %.6g, seed %llu", cases.size(),
                      settings.horizon, static_cast<unsigned long long>(settings.seed));
  return rec;
}

}  // namespace afb
