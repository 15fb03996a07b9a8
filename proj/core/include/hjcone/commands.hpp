#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjcone/scenario.hpp"
#include "hjcone/verify.hpp"

namespace hjcone {

/// Implementations of the CLI subcommands, callable directly from tests.
/// Each returns a process exit status and (optionally) writes its table to
/// out_path atomically; format is "csv" or "json". Diverged samples are
/// warned about on stderr but do not fail a run.

/// Rows: formula,t,x_1..x_n,value,residual,diverged
int cmd_solve(const Scenario& sc, const std::string& out_path,
              const std::string& format, std::string* captured = nullptr);

/// Runs the requested suites (empty: all). Prints the suite/property mapping
/// header and one line per check. Exit 1 iff a non-skipped check fails.
int cmd_verify(const Scenario& sc, const std::vector<std::string>& suites,
               const std::string& out_path, const std::string& format,
               std::vector<CheckReport>* captured = nullptr);

/// Grid-refinement study against the variational reference.
/// Rows: h,nodes,max_error,order ("" for the first h).
int cmd_convergence(const Scenario& sc, const std::vector<double>& hs,
                    const std::string& out_path, const std::string& format,
                    std::string* captured = nullptr);

/// Monotone conjugate of the scenario Hamiltonian at the evaluation points.
/// Rows: y_1..y_n,value,argmax_1..argmax_n,residual,diverged
int cmd_conjugate(const Scenario& sc, double radius, const std::string& out_path,
                  const std::string& format, std::string* captured = nullptr);

/// Boundary distance at the evaluation points.
/// Rows: x_1..x_n,distance,inside
int cmd_distance(const Scenario& sc, const std::string& out_path,
                 const std::string& format, std::string* captured = nullptr);

}  // namespace hjcone
