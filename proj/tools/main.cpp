// hjcone — command line front end.
//
// Subcommands: solve, verify, convergence, conjugate, distance.  Every
// subcommand reads a scenario JSON file; --seed replays the run with a
// different master seed, everything else about the run is pinned by the file.
// Scenario validation problems are printed one per line and exit with
// status 2; verification failures exit with status 1.

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjcone/commands.hpp"
#include "hjcone/scenario.hpp"

namespace {

hjcone::Scenario load_scenario(const std::string& path, bool seed_set,
                               std::uint64_t seed) {
  hjcone::ParseOutcome outcome = hjcone::parse_scenario_file(path);
  if (!outcome.ok()) {
    for (const std::string& e : outcome.errors)
      std::cerr << "scenario error: " << e << "\n";
    std::exit(2);
  }
  hjcone::Scenario sc = *outcome.scenario;
  if (seed_set) {
    sc.seed = seed;
    sc.optimizer.seed = seed;
  }
  return sc;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> split_doubles(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size())
      throw std::invalid_argument("bad grid spacing: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Variational solver and verification harness for Hamilton–Jacobi "
      "equations on closed convex cones"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string suites_arg, h_arg;
  double radius = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
    sub->add_option("--out", out_path, "Output file (written atomically)");
    sub->add_option("--format", format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Master seed override")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "Evaluate the solution at the scenario's points and times");
  add_common(solve);

  CLI::App* verify = app.add_subcommand(
      "verify", "Run property suites; exit 1 if any non-skipped check fails");
  add_common(verify);
  verify->add_option("--suites", suites_arg,
                     "Comma-separated suite names (default: all)");

  CLI::App* convergence = app.add_subcommand(
      "convergence",
      "Grid-refinement study of the finite-difference scheme against the "
      "variational reference");
  add_common(convergence);
  // long-only help so the spacing flag can use the bare name "h"
  convergence->set_help_flag("--help", "Print this help message and exit");
  convergence->add_option(
      "--h", h_arg,
      "Comma-separated grid spacings (default: fd.h, fd.h/2, fd.h/4)");

  CLI::App* conjugate = app.add_subcommand(
      "conjugate",
      "Monotone convex conjugate of the Hamiltonian at the scenario points");
  add_common(conjugate);
  conjugate->add_option("--radius", radius,
                        "Search-section radius (<= 0: automatic)");

  CLI::App* distance = app.add_subcommand(
      "distance", "Boundary distance of the cone at the scenario points");
  add_common(distance);

  CLI11_PARSE(app, argc, argv);

  try {
    const hjcone::Scenario sc = load_scenario(scenario_path, seed_set, seed);
    if (solve->parsed()) return hjcone::cmd_solve(sc, out_path, format);
    if (verify->parsed())
      return hjcone::cmd_verify(sc, split_list(suites_arg), out_path, format);
    if (convergence->parsed()) {
      std::vector<double> hs;
      if (!h_arg.empty()) {
        hs = split_doubles(h_arg);
      } else {
        if (!sc.fd)
          throw std::invalid_argument(
              "convergence: scenario has no fd configuration");
        hs = {sc.fd->h, sc.fd->h / 2, sc.fd->h / 4};
      }
      return hjcone::cmd_convergence(sc, hs, out_path, format);
    }
    if (conjugate->parsed())
      return hjcone::cmd_conjugate(sc, radius, out_path, format);
    if (distance->parsed()) return hjcone::cmd_distance(sc, out_path, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1)
}
