#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "afb/model.hpp"

namespace afb {

struct Tolerances {
  double rel = 1e-8;
  double abs = 1e-10;
};

/// Time-ordered samples plus a polynomial interpolant on each step, so the
/// state can be queried anywhere in [0, horizon]. Immutable once built.
class Trajectory {
 public:
  /// Per-step interpolant y(s) = c0 + c1 s + ... + c4 s^4 with
  /// s = (t - t_i) / (t_{i+1} - t_i).
  using Segment = std::array<Vec4, 5>;

  Trajectory(Params params, State x0, Tolerances tol, std::vector<double> times,
             std::vector<State> states, std::vector<Segment> segments, double estimated_error);

  /// Builds a trajectory from bare samples (e.g. a CSV file), using cubic
  /// Hermite interpolation with slopes from the vector field.
  static Trajectory from_samples(const Params& params, std::vector<double> times,
                                 std::vector<State> states, Tolerances tol = {});

  const Params& params() const { return params_; }
  const State& initial_state() const { return x0_; }
  const Tolerances& tolerances() const { return tol_; }

  std::size_t size() const { return times_.size(); }
  double time(std::size_t i) const { return times_[i]; }
  const State& state(std::size_t i) const { return states_[i]; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }

  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }

  /// Dense-output state at t, clamped into the orthant. Exact at sample times.
  Vec4 evaluate(double t) const;

  /// Sum over accepted steps of the embedded local error estimate (max norm).
  double estimated_error() const { return estimated_error_; }

 private:
  std::size_t segment_index(double t) const;

  Params params_;
  State x0_;
  Tolerances tol_;
  std::vector<double> times_;
  std::vector<State> states_;
  std::vector<Segment> segments_;
  double estimated_error_;
};

}  // namespace afb
