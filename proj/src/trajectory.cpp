#include "afb/trajectory.hpp"

#include <algorithm>
#include <utility>

#include "afb/errors.hpp"

namespace afb {

Trajectory::Trajectory(Params params, State x0, Tolerances tol, std::vector<double> times,
                       std::vector<State> states, std::vector<Segment> segments,
                       double estimated_error)
    : params_(std::move(params)),
      x0_(x0),
      tol_(tol),
      times_(std::move(times)),
      states_(std::move(states)),
      segments_(std::move(segments)),
      estimated_error_(estimated_error) {
  if (times_.empty() || times_.size() != states_.size() || segments_.size() + 1 != times_.size()) {
    throw InputError("trajectory needs n samples and n-1 segments");
  }
  if (times_.front() != 0.0) throw InputError("trajectory must start at t = 0");
  if (!(states_.front() == x0_)) throw InputError("first sample must equal the initial state");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw InputError("trajectory times must be strictly increasing");
  }
}

Trajectory Trajectory::from_samples(const Params& params, std::vector<double> times,
                                    std::vector<State> states, Tolerances tol) {
  if (times.empty() || times.size() != states.size()) {
    throw InputError("trajectory needs the same nonzero number of times and states");
  }
  std::vector<Segment> segments;
  segments.reserve(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    const Vec4& y0 = states[i].values();
    const Vec4& y1 = states[i + 1].values();
    const Vec4 f0 = vector_field(params, y0);
    const Vec4 f1 = vector_field(params, y1);
    Segment seg{};
    for (std::size_t k = 0; k < 4; ++k) {
      seg[0][k] = y0[k];
      seg[1][k] = h * f0[k];
      seg[2][k] = 3.0 * (y1[k] - y0[k]) - 2.0 * h * f0[k] - h * f1[k];
      seg[3][k] = 2.0 * (y0[k] - y1[k]) + h * f0[k] + h * f1[k];
      seg[4][k] = 0.0;
    }
    segments.push_back(seg);
  }
  const State x0 = states.front();
  return Trajectory(params, x0, tol, std::move(times), std::move(states), std::move(segments), 0.0);
}

std::size_t Trajectory::segment_index(double t) const {
  // Last sample time <= t.
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
}

Vec4 Trajectory::evaluate(double t) const {
  if (t < times_.front() || t > times_.back()) {
    throw DomainError("query time outside the trajectory span");
  }
  const std::size_t i = segment_index(t);
  if (i + 1 >= times_.size() || t == times_[i]) return states_[i].values();

  const double s = (t - times_[i]) / (times_[i + 1] - times_[i]);
  const Segment& c = segments_[i];
  Vec4 y{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double v = c[0][k] + s * (c[1][k] + s * (c[2][k] + s * (c[3][k] + s * c[4][k])));
    y[k] = std::max(v, 0.0);
  }
  return y;
}

}  // namespace afb
