#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hjcone/scenario.hpp"

namespace hjcone {

struct CheckReport {
  std::string check_name;
  std::string property;  ///< descriptive name of the verified statement
  long samples_used = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string skip_reason;
  std::uint64_t seed = 0;
  double elapsed_s = 0.0;
};

/// Suites:
///   geometry               projections, dualities, boundary distance
///   conjugation            Young-Fenchel, order reversal, g** <= g, g** = g
///   extension              agreement, Lipschitz and shape preservation
///   initial_condition      f(0,.) = psi
///   lipschitz              sup_t ||f(t,.)||_Lip = ||psi||_Lip (bracketed)
///   temporal_lipschitz     sup_x ||f(.,x)||_Lip <= sup |H| on the section
///   lp_lipschitz           l^p Lipschitz seminorms preserved (products)
///   spatial_monotonicity   f(t, x+w) >= f(t, x) for w in C*
///   temporal_monotonicity  f nondecreasing in t (needs H >= 0 on C)
///   perron                 psi - Kt <= f <= psi + Kt
///   semigroup              two-step advance matches direct evaluation
///   cross_formula          Hopf vs Hopf-Lax in the doubly convex regime
///   modification_invariance differently-extended H give the same solution
///   comparison             psi1 <= psi2 implies f1 <= f2
/// A suite whose hypotheses a scenario does not meet is reported as skipped
/// with the reason; it is never silently passed.
std::vector<std::string> suite_names();

/// suite -> property witnessed, for the report header. Every item of the
/// main well-posedness statement appears.
std::vector<std::pair<std::string, std::string>> property_map();

std::vector<CheckReport> run_suite(const std::string& suite, const Scenario& sc);

/// Max-norm or l2-norm difference of two fields on the same point list.
/// Throws if the lists disagree.
double compare_fields(const std::vector<std::pair<Point, double>>& a,
                      const std::vector<std::pair<Point, double>>& b,
                      const std::string& mode = "max");

/// True if every non-skipped check passed.
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace hjcone
