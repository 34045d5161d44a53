#include "afb/events.hpp"

#include <algorithm>
#include <functional>

#include "afb/errors.hpp"

namespace afb {

namespace {

// Shrinks [lo, hi] with inside(lo) == false and inside(hi) == true until it is
// narrower than the event tolerance. Returns the final bracket.
std::pair<double, double> bisect(double lo, double hi, const std::function<bool(double)>& inside) {
  while (hi - lo > kEventTimeTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

}  // namespace

std::string_view to_string(Observable obs) {
  switch (obs) {
    case Observable::x1: return "x1";
    case Observable::x2: return "x2";
    case Observable::x3: return "x3";
    case Observable::x4: return "x4";
    case Observable::product: return "p";
    case Observable::w: return "W";
  }
  return "?";
}

Observable parse_observable(std::string_view name) {
  if (name == "x1") return Observable::x1;
  if (name == "x2") return Observable::x2;
  if (name == "x3") return Observable::x3;
  if (name == "x4") return Observable::x4;
  if (name == "p" || name == "product") return Observable::product;
  if (name == "W" || name == "w") return Observable::w;
  throw InputError("unknown observable '" + std::string(name) + "'");
}

double observable_value(const Params& p, const Vec4& x, Observable obs) {
  switch (obs) {
    case Observable::x1: return x[0];
    case Observable::x2: return x[1];
    case Observable::x3: return x[2];
    case Observable::x4: return x[3];
    case Observable::product: return x[0] * x[3];
    case Observable::w: return w_value(p, x);
  }
  return 0.0;
}

double observable_rate(const Params& p, const Vec4& x, Observable obs) {
  const Vec4 f = vector_field(p, x);
  switch (obs) {
    case Observable::x1: return f[0];
    case Observable::x2: return f[1];
    case Observable::x3: return f[2];
    case Observable::x4: return f[3];
    case Observable::product: return f[0] * x[3] + x[0] * f[3];
    case Observable::w: return w_rate(p, x);
  }
  return 0.0;
}

std::optional<double> first_hitting(const Trajectory& traj, Observable obs, double Q,
                                    Direction direction) {
  const Params& p = traj.params();
  const auto value = [&](double t) { return observable_value(p, traj.evaluate(t), obs); };
  // "Reached" means at or past the level on the far side.
  const auto reached = [&](double v) {
    return direction == Direction::from_below ? v >= Q : v <= Q;
  };

  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double v0 = observable_value(p, traj.state(i).values(), obs);
    const double v1 = observable_value(p, traj.state(i + 1).values(), obs);
    if (!reached(v0) && reached(v1)) {
      const auto [lo, hi] =
          bisect(traj.time(i), traj.time(i + 1), [&](double t) { return reached(value(t)); });
      return hi;
    }
  }
  return std::nullopt;
}

std::vector<Excursion> excursions_above(const Trajectory& traj, double L) {
  if (!(L > 0.0)) throw DomainError("excursion level must be positive");
  const auto above = [&](double t) { return traj.evaluate(t)[0] >= L; };

  std::vector<Excursion> out;
  std::optional<Excursion> current;
  if (traj.state(0).x1() >= L) {
    current = Excursion{.level = L, .start = 0.0, .end = 0.0, .starts_at_origin = true};
  }
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const bool a0 = traj.state(i).x1() >= L;
    const bool a1 = traj.state(i + 1).x1() >= L;
    if (!a0 && a1) {
      const auto [lo, hi] = bisect(traj.time(i), traj.time(i + 1), above);
      current = Excursion{.level = L, .start = hi, .end = hi};
    } else if (a0 && !a1 && current) {
      const auto [lo, hi] =
          bisect(traj.time(i), traj.time(i + 1), [&](double t) { return !above(t); });
      current->end = lo;
      out.push_back(*current);
      current.reset();
    }
  }
  if (current) {
    current->end = traj.end_time();
    current->reaches_horizon = true;
    out.push_back(*current);
  }
  return out;
}

std::vector<LocalExtremum> local_maxima(const Trajectory& traj, Observable obs, double t_begin,
                                        double t_end) {
  const Params& p = traj.params();
  t_begin = std::max(t_begin, traj.start_time());
  t_end = std::min(t_end, traj.end_time());
  if (!(t_end > t_begin)) return {};

  std::vector<double> grid{t_begin};
  for (double t : traj.times()) {
    if (t > t_begin && t < t_end) grid.push_back(t);
  }
  grid.push_back(t_end);

  const auto rate = [&](double t) { return observable_rate(p, traj.evaluate(t), obs); };
  std::vector<LocalExtremum> out;
  double r0 = rate(grid.front());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double r1 = rate(grid[i + 1]);
    if (r0 > 0.0 && r1 <= 0.0) {
      const auto [lo, hi] = bisect(grid[i], grid[i + 1], [&](double t) { return rate(t) <= 0.0; });
      const double t_peak = 0.5 * (lo + hi);
      out.push_back({t_peak, observable_value(p, traj.evaluate(t_peak), obs)});
    }
    r0 = r1;
  }
  return out;
}

}  // namespace afb
