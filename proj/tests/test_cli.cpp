#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "afb/cli.hpp"
#include "afb/io.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using afb::cli::kExitFailed;
using afb::cli::kExitInvalid;
using afb::cli::kExitOk;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = afb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// A fresh, empty scratch directory per test.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(AFB_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST_CASE("bounds prints and writes the certificate") {
  const fs::path dir = scratch("bounds");
  const Result r = run({"bounds", "--L0", "1.75", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("T0    = 1.3936") != std::string::npos);
  CHECK(r.out.find("M1    = 3.1436") != std::string::npos);
  CHECK(r.out.find("M2    = 31.4364") != std::string::npos);
  CHECK(r.out.find("M3    = 31.4364") != std::string::npos);
  CHECK(r.out.find("gamma = 63.2062") != std::string::npos);
  CHECK(r.out.find("M4    = 63.2062") != std::string::npos);
  const afb::json cert = afb::load_json_file((dir / "certificate.json").string());
  CHECK(cert.at("M1").get<double>() == doctest::Approx(3.1436).epsilon(1e-4));
}

TEST_CASE("invalid input exits with 2") {
  const fs::path dir = scratch("invalid");
  CHECK(run({"bounds", "--params", "1,0,10,1,1,1,1,30", "--out", dir.string()}).code == kExitInvalid);
  CHECK(run({"bounds", "--params", "1,30,10", "--out", dir.string()}).code == kExitInvalid);
  CHECK(run({"bounds", "--x0", "0,-1,0,0", "--out", dir.string()}).code == kExitInvalid);
  CHECK(run({"bounds", "--L0", "1.0", "--out", dir.string()}).code == kExitInvalid);
  CHECK(run({"simulate", "--horizon", "-3", "--out", dir.string()}).code == kExitInvalid);
  CHECK(run({"frobnicate"}).code == kExitInvalid);
  CHECK(run({}).code == kExitInvalid);

  spit(dir / "broken.json", "{\"alpha\": [1, 30,");
  const Result broken = run({"bounds", "--config", (dir / "broken.json").string()});
  CHECK(broken.code == kExitInvalid);
  CHECK(broken.err.find("malformed JSON") != std::string::npos);

  spit(dir / "unknown.json", R"({"alpha": [1, 30, 10, 1, 1, 1, 1, 30], "colour": 3})");
  CHECK(run({"bounds", "--config", (dir / "unknown.json").string()}).code == kExitInvalid);

  const Result missing = run({"verify", "--trajectory", (dir / "nope.csv").string(), "--out", dir.string()});
  CHECK(missing.code == kExitInvalid);
  CHECK(missing.err.find("cannot open") != std::string::npos);
}

TEST_CASE("help exits cleanly") { CHECK(run({"--help"}).code == kExitOk); }

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("config");
  spit(dir / "run.json", R"({"alpha": [1, 1, 1, 1, 1, 1, 1, 1], "x0": [0, 0, 0, 0], "L0": 100, "horizon": 5})");
  const Result from_file = run({"bounds", "--config", (dir / "run.json").string(), "--out", dir.string()});
  REQUIRE(from_file.code == kExitOk);
  CHECK(from_file.out.find("L0    = 100.0000") != std::string::npos);
  const Result overridden =
      run({"bounds", "--config", (dir / "run.json").string(), "--L0", "200", "--out", dir.string()});
  CHECK(overridden.out.find("L0    = 200.0000") != std::string::npos);
}

TEST_CASE("simulate, verify and plot") {
  const fs::path dir = scratch("pipeline");
  const Result sim = run({"simulate", "--horizon", "50", "--out", dir.string()});
  REQUIRE(sim.code == kExitOk);
  const std::string csv = slurp(dir / "trajectory.csv");
  CHECK(csv.rfind("t,x1,x2,x3,x4\n", 0) == 0);

  SUBCASE("verify passes, in memory and from the CSV") {
    const Result v = run({"verify", "--horizon", "50", "--L0", "1.75", "--out", dir.string()});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find("[ok]   global_bounds") != std::string::npos);
    const afb::json report = afb::load_json_file((dir / "report.json").string());
    CHECK(report.at("all_passed") == true);

    const Result from_csv = run({"verify", "--trajectory", (dir / "trajectory.csv").string(), "--L0", "1.75",
                                 "--out", (dir / "csv").string()});
    CHECK(from_csv.code == kExitOk);
  }
  SUBCASE("a tampered certificate fails with 1") {
    REQUIRE(run({"bounds", "--out", dir.string()}).code == kExitOk);
    afb::json cert = afb::load_json_file((dir / "certificate.json").string());
    cert["M1"] = cert["M1"].get<double>() / 10.0;
    spit(dir / "tampered.json", cert.dump());
    const Result v = run({"verify", "--horizon", "50", "--certificate", (dir / "tampered.json").string(), "--out",
                          dir.string()});
    CHECK(v.code == kExitFailed);
    CHECK(v.out.find("[FAIL] global_bounds") != std::string::npos);
  }
  SUBCASE("a certificate for other inputs is rejected") {
    REQUIRE(run({"bounds", "--x0", "1,0,0,0", "--out", dir.string()}).code == kExitOk);
    const Result v = run({"verify", "--horizon", "50", "--certificate", (dir / "certificate.json").string(),
                          "--out", dir.string()});
    CHECK(v.code == kExitInvalid);
  }
  SUBCASE("fuzzed verify") {
    const Result v = run({"verify", "--horizon", "20", "--fuzz", "4", "--seed", "3", "--out", dir.string()});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find("fuzzed_theorem") != std::string::npos);
  }
  SUBCASE("plot writes both figures deterministically") {
    REQUIRE(run({"plot", "--horizon", "50", "--out", (dir / "a").string()}).code == kExitOk);
    REQUIRE(run({"plot", "--horizon", "50", "--out", (dir / "b").string()}).code == kExitOk);
    for (const char* name : {"states.svg", "x1_bound.svg"}) {
      const std::string a = slurp(dir / "a" / name);
      CHECK(a.rfind("<svg", 0) == 0);
      CHECK(a == slurp(dir / "b" / name));
    }
    CHECK(slurp(dir / "a" / "x1_bound.svg").find("M1 = 2.9235") != std::string::npos);
  }
}

TEST_CASE("equilibrium plots are flat lines") {
  const fs::path dir = scratch("flat");
  REQUIRE(run({"plot", "--x0", "0.1,1,1,0.333333333333333333", "--horizon", "10", "--out", dir.string()}).code ==
          kExitOk);
  const std::string svg = slurp(dir / "states.svg");
  // Each state polyline has a single y coordinate.
  std::size_t pos = 0;
  int polylines = 0;
  while ((pos = svg.find("points=\"", pos)) != std::string::npos) {
    pos += 8;
    const std::string pts = svg.substr(pos, svg.find('"', pos) - pos);
    std::istringstream is(pts);
    std::string pair, first_y;
    bool flat = true;
    while (is >> pair) {
      const std::string y = pair.substr(pair.find(',') + 1);
      if (first_y.empty()) first_y = y;
      flat = flat && y == first_y;
    }
    CHECK(flat);
    ++polylines;
  }
  CHECK(polylines == 4);
}

TEST_CASE("repeated runs produce identical files") {
  const fs::path a = scratch("repeat_a"), b = scratch("repeat_b");
  for (const fs::path& dir : {a, b}) {
    REQUIRE(run({"simulate", "--horizon", "30", "--x0", "1,2,3,4", "--out", dir.string()}).code == kExitOk);
    REQUIRE(run({"bounds", "--x0", "1,2,3,4", "--out", dir.string()}).code == kExitOk);
    REQUIRE(run({"verify", "--horizon", "30", "--x0", "1,2,3,4", "--out", dir.string()}).code == kExitOk);
  }
  for (const char* name : {"trajectory.csv", "certificate.json", "report.json"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
}
