#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "hjcone/extension.hpp"
#include "hjcone/functionals.hpp"

namespace hjcone {

enum class Formula { HopfLax, Hopf, Semigroup, FD };

const char* formula_name(Formula f);

struct SolutionSample {
  double t = 0.0;
  Point x;
  double value = 0.0;
  Point argmax;
  double residual = 0.0;
  bool diverged = false;
  Formula formula = Formula::HopfLax;
};

/// Variational solver for the Cauchy problem  d/dt f = H(grad f) on R+ x C,
/// f(0,.) = psi, with C*-increasing data. Holds per-problem caches (outer
/// search radius, the Perron constant) so campaigns over many (t,x) stay
/// cheap; all randomness still flows from opt.seed, so results are
/// deterministic and independent of evaluation order.
class VariationalSolver {
 public:
  VariationalSolver(HamiltonianSpec H, InitialConditionSpec psi,
                    ConeDescriptor cone, OptimizerConfig opt);

  /// f(t,x) = sup_{y in C} { psi(x+y) - t H*(y/t) }, t = 0 giving psi(x)
  /// exactly. Requires psi monotone Lipschitz and H convex, bounded below.
  SolutionSample hopf_lax(double t, const Point& x) const;

  /// f(t,x) = sup_{z in C, |z| <= lip} { <z,x> - psi*(z) + t H(z) }.
  /// Requires psi convex monotone Lipschitz; H merely continuous.
  /// t = 0 gives the biconjugate psi**(x) = psi(x) (by the required
  /// convexity), evaluated directly so the initial section is exact.
  SolutionSample hopf(double t, const Point& x) const;

  /// One semigroup step: f(t,x) = sup_y { field_s(x+y) - (t-s) H*(y/(t-s)) }
  /// for a sampler of f(s,.). s = 0 with field_s = psi is hopf_lax.
  /// outer_cfg (when given) replaces the stored optimizer budget for the
  /// outer search; useful because field_s is typically expensive. An
  /// override with multistart_count = 0 goes further and keeps only the two
  /// structured starts (smooth-envelope heuristic and apex), the cheapest
  /// honest search when every field sample costs a full solve.
  SolutionSample semigroup_advance(const Evaluator& field_s, double s, double t,
                                   const Point& x,
                                   const OptimizerConfig* outer_cfg = nullptr) const;

  /// Barrier envelopes psi(x) - K t <= f <= psi(x) + K t with
  /// K = 1.1 sup_{|y| <= lip} |F(y)|, F the clip extension of H at radius lip.
  std::pair<double, double> perron_bounds(double t, const Point& x) const;

  /// Outer search radius: doubled from 2 lip until the sampled radial slope
  /// of H* exceeds lip + 1 (cap 2^10, flagged on the affected samples).
  double search_radius() const;

  const HamiltonianSpec& hamiltonian() const { return H_; }
  const InitialConditionSpec& initial() const { return psi_; }
  const ConeDescriptor& cone() const { return cone_; }
  const OptimizerConfig& optimizer() const { return opt_; }

 private:
  struct Cache;
  double conjugate_radius(double znorm) const;

  HamiltonianSpec H_;
  InitialConditionSpec psi_;
  ConeDescriptor cone_;
  OptimizerConfig opt_;
  std::shared_ptr<Cache> cache_;
};

/// Free-function forms for one-off evaluations.
SolutionSample hopf_lax(const HamiltonianSpec& H, const InitialConditionSpec& psi,
                        const ConeDescriptor& cone, double t, const Point& x,
                        const OptimizerConfig& opt);
SolutionSample hopf(const HamiltonianSpec& H, const InitialConditionSpec& psi,
                    const ConeDescriptor& cone, double t, const Point& x,
                    const OptimizerConfig& opt);
std::pair<double, double> perron_bounds(const HamiltonianSpec& H,
                                        const InitialConditionSpec& psi,
                                        const ConeDescriptor& cone, double t,
                                        const Point& x,
                                        const OptimizerConfig& opt);

}  // namespace hjcone
