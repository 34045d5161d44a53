#pragma once

#include <iosfwd>
#include <string>

#include "afb/bounds.hpp"
#include "afb/trajectory.hpp"
#include "afb/verifier.hpp"
#include "json.hpp"

namespace afb {

using nlohmann::json;

// {"alpha": [a1, ..., a8]}
json params_to_json(const Params& p);
Params params_from_json(const json& j);

// {"x": [x1, x2, x3, x4]}
json state_to_json(const State& x);
State state_from_json(const json& j);

json certificate_to_json(const BoundCertificate& cert);
BoundCertificate certificate_from_json(const json& j);

json check_to_json(const CheckRecord& check);
json report_to_json(const VerificationReport& report);

/// Output grid for CSV export: every integrator step plus a uniform grid of
/// spacing dt, merged and sorted.
std::vector<double> export_times(const Trajectory& traj, double dt);

/// Header `t,x1,x2,x3,x4`, 17 significant digits, LF line endings.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double dt = 0.01);

/// Parses a trajectory CSV. Slight negative undershoot (>= -1e-9) is clamped;
/// the dense output is rebuilt by cubic Hermite interpolation.
Trajectory read_trajectory_csv(std::istream& is, const Params& p);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

json parse_json(std::istream& is);
json load_json_file(const std::string& path);

}  // namespace afb
