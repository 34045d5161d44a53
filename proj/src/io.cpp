#include "afb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "afb/errors.hpp"

namespace afb {

namespace {

constexpr double kCsvUndershoot = 1e-9;

template <std::size_t N>
std::array<double, N> number_array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("expected an object with key '") + key + "'");
  }
  const json& arr = j.at(key);
  if (!arr.is_array() || arr.size() != N) {
    throw InputError(std::string("'") + key + "' must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!arr[i].is_number()) throw InputError(std::string("'") + key + "' must contain numbers");
    out[i] = arr[i].get<double>();
  }
  return out;
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InputError(std::string("certificate field '") + key + "' missing or not a number");
  }
  return j.at(key).get<double>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json params_to_json(const Params& p) { return json{{"alpha", p.values()}}; }

Params params_from_json(const json& j) { return Params(number_array<Params::kCount>(j, "alpha")); }

json state_to_json(const State& x) { return json{{"x", x.values()}}; }

State state_from_json(const json& j) { return State(number_array<4>(j, "x")); }

json certificate_to_json(const BoundCertificate& cert) {
  return json{
      {"L_star", cert.L_star}, {"L_used", cert.L_used}, {"T0", cert.T0},
      {"M1", cert.M1},         {"M2", cert.M2},         {"M3", cert.M3},
      {"M4", cert.M4},         {"gamma", cert.gamma},   {"W0", cert.W0},
      {"params", params_to_json(cert.params)},          {"x0", state_to_json(cert.x0)},
  };
}

BoundCertificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw InputError("certificate must be a JSON object");
  if (!j.contains("params") || !j.contains("x0")) {
    throw InputError("certificate lacks its params/x0 provenance");
  }
  return BoundCertificate{
      .params = params_from_json(j.at("params")),
      .x0 = state_from_json(j.at("x0")),
      .L_star = number(j, "L_star"),
      .L_used = number(j, "L_used"),
      .T0 = number(j, "T0"),
      .M1 = number(j, "M1"),
      .M2 = number(j, "M2"),
      .M3 = number(j, "M3"),
      .M4 = number(j, "M4"),
      .gamma = number(j, "gamma"),
      .W0 = number(j, "W0"),
  };
}

json check_to_json(const CheckRecord& check) {
  return json{
      {"name", check.name},
      {"outcome", std::string(to_string(check.outcome))},
      {"passed", check.ok()},
      {"worst_margin", finite_or_null(check.worst_margin)},
      {"location", finite_or_null(check.location)},
      {"detail", check.detail},
  };
}

json report_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const CheckRecord& c : report.checks) checks.push_back(check_to_json(c));
  return json{
      {"all_passed", report.all_passed()},
      {"params", params_to_json(report.params)},
      {"x0", state_to_json(report.x0)},
      {"certificate", certificate_to_json(report.certificate)},
      {"checks", std::move(checks)},
  };
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> export_times(const Trajectory& traj, double dt) {
  if (!(dt > 0.0)) throw DomainError("CSV sampling interval must be positive");
  const double end = traj.end_time();
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(end / dt));
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * dt);

  std::vector<double> merged;
  merged.reserve(grid.size() + traj.size());
  std::merge(grid.begin(), grid.end(), traj.times().begin(), traj.times().end(),
             std::back_inserter(merged));
  // Drop grid points that (nearly) coincide with a step time.
  std::vector<double> out;
  out.reserve(merged.size());
  for (double t : merged) {
    if (t > end) continue;
    if (!out.empty() && t - out.back() <= 1e-12 * std::max(1.0, t)) {
      continue;
    }
    out.push_back(t);
  }
  // Integrator step times are authoritative; make sure the last one is there.
  if (out.back() != end) out.back() = end;
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, double dt) {
  os << "t,x1,x2,x3,x4\n";
  for (double t : export_times(traj, dt)) {
    const Vec4 x = traj.evaluate(t);
    os << format_double(t);
    for (double v : x) os << ',' << format_double(v);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, const Params& p) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("empty trajectory CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x1,x2,x3,x4") throw InputError("trajectory CSV must start with 't,x1,x2,x3,x4'");

  std::vector<double> times;
  std::vector<State> states;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 5> v{};
    const char* cursor = line.c_str();
    for (std::size_t k = 0; k < 5; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(cursor, &end);
      if (end == cursor) throw InputError("malformed number on CSV row " + std::to_string(row));
      cursor = end;
      if (k < 4) {
        if (*cursor != ',') throw InputError("expected 5 columns on CSV row " + std::to_string(row));
        ++cursor;
      }
    }
    if (*cursor != '\0') throw InputError("trailing data on CSV row " + std::to_string(row));
    times.push_back(v[0]);
    try {
      states.push_back(State::clamped({v[1], v[2], v[3], v[4]}, kCsvUndershoot));
    } catch (const InvalidState& e) {
      throw InputError("CSV row " + std::to_string(row) + ": " + e.what());
    }
  }
  if (times.empty()) throw InputError("trajectory CSV has no samples");
  return Trajectory::from_samples(p, std::move(times), std::move(states));
}

json parse_json(std::istream& is) {
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_json(in);
}

}  // namespace afb
