#include "afb/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "afb/errors.hpp"
#include "afb/integrator.hpp"
#include "afb/io.hpp"
#include "afb/plot.hpp"
#include "afb/verifier.hpp"

namespace afb::cli {

namespace {

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0') {
      throw InputError(std::string(flag) + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw InputError(std::string(flag) + " expects " + std::to_string(expected) +
                     " comma-separated values");
  }
  return out;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << contents;
}

Trajectory load_or_simulate(const RunConfig& config) {
  if (config.trajectory) {
    std::ifstream in(*config.trajectory);
    if (!in) throw InputError("cannot open " + config.trajectory->string());
    return read_trajectory_csv(in, config.params);
  }
  return integrate(config.params, config.x0, config.horizon, {.tol = config.tol});
}

double require_number(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw InputError(std::string("config '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  const json j = load_json_file(path.string());
  if (!j.is_object()) throw InputError("config must be a JSON object");
  static const std::vector<std::string> known{"alpha", "x0",   "horizon", "rel_tol",    "abs_tol",    "L0",
                                              "out",   "seed", "fuzz",    "trajectory", "certificate"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  if (j.contains("alpha")) c.params = params_from_json(j);
  if (j.contains("x0")) c.x0 = state_from_json(json{{"x", j.at("x0")}});
  if (j.contains("horizon")) c.horizon = require_number(j, "horizon");
  if (j.contains("rel_tol")) c.tol.rel = require_number(j, "rel_tol");
  if (j.contains("abs_tol")) c.tol.abs = require_number(j, "abs_tol");
  if (j.contains("L0")) c.L0 = require_number(j, "L0");
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("fuzz")) c.fuzz = j.at("fuzz").get<std::size_t>();
  if (j.contains("trajectory")) c.trajectory = j.at("trajectory").get<std::string>();
  if (j.contains("certificate")) c.certificate = j.at("certificate").get<std::string>();
  return c;
}

int cmd_bounds(const RunConfig& config, std::ostream& out) {
  const BoundCertificate cert = certificate(config.params, config.x0, config.L0);
  write_file(config.out / "certificate.json", certificate_to_json(cert).dump(2) + "\n");
  out << "L*    = " << fixed4(cert.L_star) << '\n'
      << "L0    = " << fixed4(cert.L_used) << '\n'
      << "T0    = " << fixed4(cert.T0) << '\n'
      << "M1    = " << fixed4(cert.M1) << '\n'
      << "M2    = " << fixed4(cert.M2) << '\n'
      << "M3    = " << fixed4(cert.M3) << '\n'
      << "M4    = " << fixed4(cert.M4) << '\n'
      << "gamma = " << fixed4(cert.gamma) << '\n'
      << "W(0)  = " << fixed4(cert.W0) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const Trajectory traj = integrate(config.params, config.x0, config.horizon, {.tol = config.tol});
  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  write_file(config.out / "trajectory.csv", csv.str());

  Vec4 max{};
  for (const State& s : traj.states()) {
    for (std::size_t k = 0; k < 4; ++k) max[k] = std::max(max[k], s[k]);
  }
  out << "steps " << traj.size() - 1 << ", horizon " << config.horizon << ", max x1 = " << fixed4(max[0])
      << ", max x2 = " << fixed4(max[1]) << ", max x3 = " << fixed4(max[2]) << ", max x4 = " << fixed4(max[3])
      << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const Trajectory traj = load_or_simulate(config);
  const BoundCertificate cert =
      config.certificate ? certificate_from_json(load_json_file(config.certificate->string()))
                         : certificate(traj.params(), traj.initial_state(), config.L0);
  if (!(cert.params == traj.params()) || !(cert.x0 == traj.initial_state())) {
    throw ProvenanceError("certificate was computed for different params or x0");
  }
  VerificationReport report = verify(traj, cert);
  if (config.fuzz > 0) {
    report.checks.push_back(check_fuzzed_theorem(
        {.seed = config.seed, .count = config.fuzz, .horizon = config.horizon, .tol = config.tol}));
  }
  write_file(config.out / "report.json", report_to_json(report).dump(2) + "\n");
  for (const CheckRecord& c : report.checks) {
    out << (c.ok() ? "[ok]   " : "[FAIL] ") << c.name << " (" << to_string(c.outcome) << "): " << c.detail
        << '\n';
  }
  return report.all_passed() ? kExitOk : kExitFailed;
}

int cmd_plot(const RunConfig& config, std::ostream& out) {
  const Trajectory traj = load_or_simulate(config);
  const BoundCertificate cert = certificate(traj.params(), traj.initial_state(), config.L0);
  const State& x0 = traj.initial_state();
  char label[160];
  std::snprintf(label, sizeof label, "x(0) = [%g, %g, %g, %g]", x0.x1(), x0.x2(), x0.x3(), x0.x4());
  write_file(config.out / "states.svg", states_svg(traj, std::string("All states, ") + label));
  write_file(config.out / "x1_bound.svg", x1_bound_svg(traj, cert.M1, std::string("x1 and M1, ") + label));
  out << "wrote " << (config.out / "states.svg").string() << " and " << (config.out / "x1_bound.svg").string()
      << '\n';
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Boundedness certificates and verification for the antithetic feedback loop", "afb"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, params_text, x0_text, out_dir, trajectory_path, certificate_path;
  double horizon = 0.0, L0 = 0.0, rel_tol = 0.0, abs_tol = 0.0;
  std::uint64_t seed = 0;
  std::size_t fuzz = 0;

  app.add_option("--config", config_path, "JSON run configuration");
  auto* params_opt = app.add_option("--params", params_text, "a1,...,a8");
  auto* x0_opt = app.add_option("--x0", x0_text, "x1,x2,x3,x4");
  auto* horizon_opt = app.add_option("--horizon", horizon, "simulation horizon");
  auto* L0_opt = app.add_option("--L0", L0, "level used for the certificate (>= L*)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "fuzz seed");
  auto* fuzz_opt = app.add_option("--fuzz", fuzz, "number of random (params, x0) pairs for verify");
  auto* rel_opt = app.add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  auto* abs_opt = app.add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
  auto* traj_opt = app.add_option("--trajectory", trajectory_path, "trajectory CSV (verify, plot)");
  auto* cert_opt = app.add_option("--certificate", certificate_path, "certificate JSON (verify)");

  auto* bounds = app.add_subcommand("bounds", "compute the bound certificate");
  auto* simulate = app.add_subcommand("simulate", "integrate and write trajectory.csv");
  auto* verify_cmd = app.add_subcommand("verify", "run every check and write report.json");
  auto* plot = app.add_subcommand("plot", "write states.svg and x1_bound.svg");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (*params_opt) {
      const auto v = parse_list(params_text, Params::kCount, "--params");
      std::array<double, Params::kCount> a{};
      std::copy(v.begin(), v.end(), a.begin());
      config.params = Params(a);
    }
    if (*x0_opt) {
      const auto v = parse_list(x0_text, 4, "--x0");
      config.x0 = State(v[0], v[1], v[2], v[3]);
    }
    if (*horizon_opt) config.horizon = horizon;
    if (*L0_opt) config.L0 = L0;
    if (*out_opt) config.out = out_dir;
    if (*seed_opt) config.seed = seed;
    if (*fuzz_opt) config.fuzz = fuzz;
    if (*rel_opt) config.tol.rel = rel_tol;
    if (*abs_opt) config.tol.abs = abs_tol;
    if (*traj_opt) config.trajectory = trajectory_path;
    if (*cert_opt) config.certificate = certificate_path;
    if (!(config.horizon > 0.0)) throw InputError("horizon must be positive");

    if (bounds->parsed()) return cmd_bounds(config, out);
    if (simulate->parsed()) return cmd_simulate(config, out);
    if (verify_cmd->parsed()) return cmd_verify(config, out);
    if (plot->parsed()) return cmd_plot(config, out);
    return kExitInvalid;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << " (last valid time " << e.last_time() << ")\n";
    return kExitFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const json::exception& e) {
    err << "error: invalid config value: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace afb::cli
