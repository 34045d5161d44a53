#pragma once

// Level crossings of scalar observables along a trajectory: first hitting
// times, excursions of x1 above a level, and local maxima.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afb/trajectory.hpp"

namespace afb {

/// Every functional of the state tracked by the boundedness argument.
enum class Observable { x1, x2, x3, x4, product, w };

std::string_view to_string(Observable obs);
/// Accepts "x1".."x4", "p" / "product" and "W" / "w".
Observable parse_observable(std::string_view name);

double observable_value(const Params& p, const Vec4& x, Observable obs);
/// Time derivative of the observable along the flow, from the vector field.
double observable_rate(const Params& p, const Vec4& x, Observable obs);

enum class Direction { from_below, from_above };

/// Crossing times are refined to this width by bisection on the dense output.
inline constexpr double kEventTimeTolerance = 1e-10;

/// Earliest time at which the observable reaches Q coming from the given
/// side, located by a sign-change scan over samples and refined by bisection.
std::optional<double> first_hitting(const Trajectory& traj, Observable obs, double Q,
                                    Direction direction);

struct Excursion {
  double level;
  double start;
  double end;
  /// x1 was already at or above the level at t = 0 (no refined up-crossing).
  bool starts_at_origin = false;
  /// The excursion was still running at the end of the trajectory.
  bool reaches_horizon = false;

  double duration() const { return end - start; }
};

/// Maximal intervals with x1 >= L, ordered by start time.
std::vector<Excursion> excursions_above(const Trajectory& traj, double L);

struct LocalExtremum {
  double time;
  double value;
};

/// Interior local maxima of the observable on [t_begin, t_end], located where
/// its analytic rate changes sign from + to - and refined by bisection.
std::vector<LocalExtremum> local_maxima(const Trajectory& traj, Observable obs, double t_begin,
                                        double t_end);

}  // namespace afb
