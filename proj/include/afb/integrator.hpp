#pragma once

#include <cstddef>
#include <functional>

#include "afb/model.hpp"
#include "afb/trajectory.hpp"

namespace afb {

struct IntegrateOptions {
  Tolerances tol;
  std::size_t max_steps = 2'000'000;
};

/// Autonomous right-hand side y' = f(y).
using RightHandSide = std::function<Vec4(const Vec4&)>;

/// Dormand-Prince 5(4) with max-norm error control
/// |err_i| <= rel * max(|y_i|, |y_i'|) + abs, and its 4th-order continuous
/// extension for dense output. Steps that push a component below -abs are
/// rejected and retried with half the step; smaller undershoots are clamped
/// to zero.
///
/// Throws IntegrationError on step-size underflow, too many steps or a
/// non-finite state.
Trajectory integrate(const Params& p, const State& x0, double horizon,
                     const IntegrateOptions& options = {});

/// Same scheme for an arbitrary right-hand side. `p` is only carried along
/// as the trajectory's provenance (it is used to evaluate observables).
Trajectory integrate_rhs(const Params& p, const RightHandSide& rhs, const State& x0,
                         double horizon, const IntegrateOptions& options = {});

}  // namespace afb
