#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hjcone/commands.hpp"
#include "hjcone/scenario.hpp"

using namespace hjcone;
namespace fs = std::filesystem;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(HJCONE_SCENARIO_DIR) + "/" + name;
}

Scenario load(const std::string& name) {
  const ParseOutcome out = parse_scenario_file(scenario_path(name));
  REQUIRE_MESSAGE(out.ok(), "scenario " << name << " must parse");
  return *out.scenario;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file " << path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

fs::path temp_file(const std::string& stem) {
  const fs::path dir = fs::temp_directory_path() / "hjcone-tests";
  fs::create_directories(dir);
  return dir / stem;
}

bool errors_mention(const std::vector<std::string>& errs,
                    const std::string& needle) {
  for (const std::string& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("bundled scenarios parse and round-trip through emission") {
  for (const std::string& name :
       {"orthant1d-quadratic.json", "product2d-quadratic.json",
        "psd-quadratic.json", "orthant1d-clipped.json",
        "orthant1d-shifted.json", "negative-understated-lip.json",
        "negative-misdeclared-nonneg.json"}) {
    CAPTURE(name);
    const Scenario sc = load(name);
    const ParseOutcome again = parse_scenario(emit_scenario(sc));
    REQUIRE(again.ok());
    CHECK(*again.scenario == sc);
  }
}

TEST_CASE("parser reports all problems with named locations") {
  // weights that do not sum to 1
  ParseOutcome out = parse_scenario(R"({
    "cone": {"kind": "product",
              "factors": [{"kind": "orthant", "dim": 1},
                          {"kind": "orthant", "dim": 1}],
              "weights": [0.6, 0.3]},
    "hamiltonian": {"name": "quadratic"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0, 1.0]}}},
    "times": [0.0],
    "points": [[0.0, 0.0]],
    "seed": 1
  })");
  CHECK(!out.ok());
  CHECK(errors_mention(out.errors, "weights must sum to 1"));

  // unknown formula names the valid set
  out = parse_scenario(R"({
    "cone": {"kind": "orthant", "dim": 1},
    "hamiltonian": {"name": "quadratic"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0]}}},
    "formula": "hopf2",
    "times": [0.0],
    "points": [[0.0]],
    "seed": 1
  })");
  CHECK(!out.ok());
  CHECK(errors_mention(out.errors, "hopf_lax"));

  // unknown keys are hard errors; several problems surface at once
  out = parse_scenario(R"({
    "cone": {"kind": "orthant", "dim": 1},
    "hamiltonian": {"name": "mystery"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0]}}},
    "times": [0.0],
    "points": [[0.0]],
    "turbo": true,
    "seed": 1
  })");
  CHECK(!out.ok());
  CHECK(out.errors.size() >= 2);
  CHECK(errors_mention(out.errors, "turbo"));
  CHECK(errors_mention(out.errors, "mystery"));

  // grid and points are mutually exclusive
  out = parse_scenario(R"({
    "cone": {"kind": "orthant", "dim": 1},
    "hamiltonian": {"name": "quadratic"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0]}}},
    "times": [0.0],
    "points": [[0.0]],
    "grid": {"min": [0.0], "max": [1.0], "n": [3]},
    "seed": 1
  })");
  CHECK(!out.ok());

  // the grid scheme only exists for low-dimensional orthant families
  out = parse_scenario(R"({
    "cone": {"kind": "psd", "matrix_dim": 2},
    "hamiltonian": {"name": "norm2sq"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0, 0.0, 1.0]}}},
    "times": [0.0],
    "points": [[0.0, 0.0, 0.0]],
    "fd": {"h": 0.1},
    "seed": 1
  })");
  CHECK(!out.ok());
}

TEST_CASE("grid point lists materialise as a lattice") {
  const ParseOutcome out = parse_scenario(R"({
    "cone": {"kind": "orthant", "dim": 2},
    "hamiltonian": {"name": "quadratic"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0, 1.0]}}},
    "times": [0.5],
    "grid": {"min": [0.0, 0.0], "max": [1.0, 2.0], "n": [2, 3]},
    "seed": 3
  })");
  REQUIRE(out.ok());
  const std::vector<Point> pts = out.scenario->eval_points();
  REQUIRE(pts.size() == 6);
  CHECK(pts.front() == Point{0.0, 0.0});
  CHECK(pts.back() == Point{1.0, 2.0});
}

TEST_CASE("solve emits the documented four rows for the 1d scenario") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  const fs::path out = temp_file("solve.csv");
  CHECK(cmd_solve(sc, out.string(), "csv", &text) == 0);
  const std::vector<std::string> ls = lines_of(text);
  REQUIRE(ls.size() == 5);  // header + 2 times x 2 points
  CHECK(ls[0] == "formula,t,x_1,value,residual,diverged");
  // t = 0 rows evaluate the initial condition exactly
  CHECK(ls[1].rfind("hopf_lax,0,0,0,", 0) == 0);
  CHECK(ls[2].rfind("hopf_lax,0,1,1,", 0) == 0);
  // the frozen closed-form value f(1,0) = 1/2
  double v10 = 0.0, v11 = 0.0;
  {
    std::stringstream ss(ls[3]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0] == "hopf_lax");
    CHECK(cells[1] == "1");
    CHECK(cells[2] == "0");
    v10 = std::stod(cells[3]);
    CHECK(cells[5] == "0");  // not diverged
  }
  CHECK(std::fabs(v10 - 0.5) <= 1e-3);
  {
    std::stringstream ss(ls[4]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    v11 = std::stod(cells[3]);
  }
  CHECK(std::fabs(v11 - 1.5) <= 1e-3);
  // the atomic write left no temporary behind
  CHECK(read_file(out.string()) == text);
  CHECK(!fs::exists(out.string() + ".tmp"));
  fs::remove(out);
}

TEST_CASE("solve golden file is stable") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  CHECK(cmd_solve(sc, temp_file("golden-probe.csv").string(), "csv", &text) == 0);
  CHECK(text == read_file(std::string(HJCONE_GOLDEN_DIR) +
                          "/orthant1d-quadratic-solve.csv"));
  fs::remove(temp_file("golden-probe.csv"));
}

TEST_CASE("distance golden file is stable") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  CHECK(cmd_distance(sc, temp_file("golden-dist.csv").string(), "csv", &text) == 0);
  CHECK(text == read_file(std::string(HJCONE_GOLDEN_DIR) +
                          "/orthant1d-quadratic-distance.csv"));
  fs::remove(temp_file("golden-dist.csv"));
}

TEST_CASE("json mirrors the csv rows") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  CHECK(cmd_solve(sc, temp_file("solve.json").string(), "json", &text) == 0);
  const nlohmann::json j = nlohmann::json::parse(text);
  REQUIRE(j.is_array());
  CHECK(j.size() == 4);
  CHECK(j[0]["formula"] == "hopf_lax");
  CHECK(j[0]["t"] == 0.0);
  CHECK(j[0]["value"] == 0.0);
  fs::remove(temp_file("solve.json"));
}

TEST_CASE("verify command exit codes") {
  // all suites green (or explicitly skipped) on the 1d scenario
  const fs::path out = temp_file("verify.csv");
  std::vector<CheckReport> reports;
  CHECK(cmd_verify(load("orthant1d-quadratic.json"), {}, out.string(), "csv",
                   &reports) == 0);
  CHECK(!reports.empty());
  // the report table has one row per check
  const std::vector<std::string> ls = lines_of(read_file(out.string()));
  CHECK(ls.size() == reports.size() + 1);
  CHECK(ls[0] ==
        "check,samples,max_violation,tolerance,result,skip_reason,seed,"
        "elapsed_s");
  fs::remove(out);

  // understated Lipschitz constant: failing suite, exit 1
  CHECK(cmd_verify(load("negative-understated-lip.json"), {"lipschitz"},
                   temp_file("verify-neg.csv").string(), "csv") == 1);
  fs::remove(temp_file("verify-neg.csv"));

  // correctly declared shifted nonlinearity: skipped suite, exit 0
  CHECK(cmd_verify(load("orthant1d-shifted.json"), {"temporal_monotonicity"},
                   temp_file("verify-skip.csv").string(), "csv") == 0);
  fs::remove(temp_file("verify-skip.csv"));

  CHECK_THROWS_AS(cmd_verify(load("orthant1d-quadratic.json"), {"bogus"},
                             "", "csv"),
                  std::invalid_argument);
}

TEST_CASE("convergence command") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  const fs::path out = temp_file("conv.csv");
  CHECK(cmd_convergence(sc, {0.08, 0.04}, out.string(), "csv", &text) == 0);
  const std::vector<std::string> ls = lines_of(text);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "h,nodes,max_error,order");
  // linear data is reproduced exactly, so the order column stays blank
  for (size_t i = 1; i < ls.size(); ++i) {
    std::stringstream ss(ls[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 4) cells.push_back("");
    CHECK(std::stod(cells[2]) <= 1e-9);
    CHECK(cells[3] == "");
  }
  fs::remove(out);

  // a scenario without an fd block is a usage error
  CHECK_THROWS_AS(
      cmd_convergence(load("product2d-quadratic.json"), {0.1}, "", "csv"),
      std::invalid_argument);
  CHECK_THROWS_AS(cmd_convergence(sc, {}, "", "csv"), std::invalid_argument);
  CHECK_THROWS_AS(cmd_convergence(sc, {-0.1}, "", "csv"),
                  std::invalid_argument);
}

TEST_CASE("convergence measures a genuine rate on kinked data") {
  const Scenario sc = load("orthant1d-clipped.json");
  std::string text;
  CHECK(cmd_convergence(sc, {0.04, 0.02, 0.01},
                        temp_file("conv2.csv").string(), "csv", &text) == 0);
  const std::vector<std::string> ls = lines_of(text);
  REQUIRE(ls.size() == 4);
  // the comparison window spans the band the gradient kink sweeps before the
  // horizon; monotone schemes converge at order one half there, so require
  // at least 0.4 and strictly decreasing errors
  double prev = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < ls.size(); ++i) {
    std::stringstream ss(ls[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 4) cells.push_back("");
    const double err = std::stod(cells[2]);
    CHECK(err < prev);
    prev = err;
    if (i >= 2) CHECK(std::stod(cells[3]) >= 0.4);
  }
  fs::remove(temp_file("conv2.csv"));
}

TEST_CASE("conjugate command evaluates the nonlinearity's conjugate") {
  const Scenario sc = load("orthant1d-quadratic.json");
  std::string text;
  CHECK(cmd_conjugate(sc, 0.0, temp_file("conj.csv").string(), "csv", &text) == 0);
  const std::vector<std::string> ls = lines_of(text);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "y_1,value,argmax_1,residual,diverged");
  // H = p^2/2 conjugates to y^2/2 on the half line: values at y = 0 and 1
  std::stringstream s1(ls[1]), s2(ls[2]);
  std::string cell;
  std::vector<std::string> c1, c2;
  while (std::getline(s1, cell, ',')) c1.push_back(cell);
  while (std::getline(s2, cell, ',')) c2.push_back(cell);
  CHECK(std::fabs(std::stod(c1[1]) - 0.0) <= 1e-6);
  CHECK(std::fabs(std::stod(c2[1]) - 0.5) <= 1e-6);
  fs::remove(temp_file("conj.csv"));
}

TEST_CASE("distance command flags outside points with signed values") {
  const ParseOutcome out = parse_scenario(R"({
    "cone": {"kind": "orthant", "dim": 2},
    "hamiltonian": {"name": "quadratic"},
    "initial": {"name": "linear", "params": {"vectors": {"p": [1.0, 1.0]}}},
    "times": [0.0],
    "points": [[1.0, 2.0], [-3.0, 4.0]],
    "seed": 9
  })");
  REQUIRE(out.ok());
  std::string text;
  CHECK(cmd_distance(*out.scenario, temp_file("dist.csv").string(), "csv",
                     &text) == 0);
  const std::vector<std::string> ls = lines_of(text);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "x_1,x_2,distance,inside");
  CHECK(ls[1] == "1,2,1,1");
  CHECK(ls[2] == "-3,4,-3,0");
  fs::remove(temp_file("dist.csv"));
}

TEST_CASE("the installed binary wires the subcommands") {
  const fs::path out = temp_file("cli-smoke.csv");
  const std::string cmd = std::string(HJCONE_CLI_PATH) + " solve --scenario " +
                          scenario_path("orthant1d-quadratic.json") +
                          " --out " + out.string() + " --format csv";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::vector<std::string> ls = lines_of(read_file(out.string()));
  CHECK(ls.size() == 5);
  fs::remove(out);

  // scenario problems exit with status 2
  const std::string bad = std::string(HJCONE_CLI_PATH) +
                          " solve --scenario /nonexistent.json 2>/dev/null";
  const int rc = std::system(bad.c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}
