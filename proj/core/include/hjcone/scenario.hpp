#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjcone/fd.hpp"
#include "hjcone/registry.hpp"
#include "hjcone/solvers.hpp"

namespace hjcone {

struct FunctionConfig {
  std::string name;
  EvaluatorParams params;
  /// Flag/lip overrides; when absent the registry's exact metadata is used.
  std::optional<bool> monotone, convex, nonneg;
  std::optional<double> lip;

  bool operator==(const FunctionConfig&) const = default;
};

struct ExtensionConfig {
  std::string method = "clip";  ///< "lip" | "clip" | "growing"
  double radius = 1.0;          ///< agreement radius for "clip"

  bool operator==(const ExtensionConfig&) const = default;
};

/// Rectangular lattice of evaluation points (inclusive endpoints).
struct EvalGrid {
  std::vector<double> min, max;
  std::vector<int> n;

  bool operator==(const EvalGrid&) const = default;
};

struct FdConfig {
  double h = 0.02;
  double extent = 0.0;  ///< 0: derived from points, horizon and dissipation
  double cfl = 0.5;
  double T = 1.0;

  bool operator==(const FdConfig&) const = default;
};

/// A fully pinned experiment: cone, data, formula selection, evaluation
/// points, optimizer budget, and the master seed every check derives its
/// randomness from.
struct Scenario {
  ConeDescriptor cone = ConeDescriptor::orthant(1);
  FunctionConfig hamiltonian;
  FunctionConfig initial;
  ExtensionConfig extension;
  std::string formula = "both";  ///< "hopf_lax" | "hopf" | "both"
  std::vector<double> times;
  std::vector<Point> points;        // exactly one of points/grid set
  std::optional<EvalGrid> grid;
  OptimizerConfig optimizer;
  std::optional<FdConfig> fd;
  std::uint64_t seed = 0;

  HamiltonianSpec make_hamiltonian_spec() const;
  InitialConditionSpec make_initial_spec() const;
  HamiltonianSpec make_extended_hamiltonian() const;
  VariationalSolver make_solver() const;
  /// Explicit points, or the materialised lattice when grid is set.
  std::vector<Point> eval_points() const;

  bool operator==(const Scenario&) const;
};

struct ParseOutcome {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;  ///< all validation errors, not just the first

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Parses and validates a scenario from JSON text. Unknown keys anywhere are
/// hard errors; every problem found is reported.
ParseOutcome parse_scenario(const std::string& json_text);
ParseOutcome parse_scenario_file(const std::string& path);

/// Canonical JSON emission; parse(emit(s)) == s.
std::string emit_scenario(const Scenario& s);

}  // namespace hjcone
