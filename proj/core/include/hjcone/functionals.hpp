#pragma once

#include <functional>
#include <limits>
#include <string>

#include "hjcone/cones.hpp"
#include "hjcone/optimize.hpp"

namespace hjcone {

using Evaluator = std::function<double(const Point&)>;

struct FunctionFlags {
  bool monotone_on_C = false;  ///< C*-increasing: g(x) >= g(y) when x-y in C*
  bool convex_on_C = false;
  bool nonneg_on_C = false;
};

/// A nonlinearity H together with declared analytic metadata. Evaluators are
/// defined on the whole ambient space (extensions and finite-difference probes
/// step slightly off the cone). Flags are declarations, spot-verified by
/// sampling in the verify suites, never proved.
struct HamiltonianSpec {
  Evaluator evaluator;
  FunctionFlags flags;
  /// inf over C; -inf when unknown.
  double lower_bound = -std::numeric_limits<double>::infinity();
  /// Radius -> Lipschitz constant of the restriction to C ∩ B(0,R).
  std::function<double(double)> local_lip;
  /// +inf when not globally Lipschitz.
  double global_lip = std::numeric_limits<double>::infinity();
  std::string name;  ///< registry name, empty for ad-hoc evaluators
};

/// Initial condition psi with its Lipschitz constant (declared; the harness
/// checks tightness by sampling).
struct InitialConditionSpec {
  Evaluator evaluator;
  double lip = 0.0;
  FunctionFlags flags;
  std::string name;
};

struct ConjugateResult {
  double value = 0.0;
  Point argmax;
  double residual = 0.0;
  /// Set when the maximiser sits on the search radius with outward slope
  /// above 1e-6: the cone-restricted sup is +inf (or the radius is too small).
  bool diverged = false;
};

/// Central finite-difference gradient, h = 1e-6 (1+|x|).
Point numeric_gradient(const Evaluator& g, const ConeDescriptor& cone,
                       const Point& x);

/// Monotone convex conjugate g*(y) = sup_{x in C, |x| <= radius} {<x,y> - g(x)}.
ConjugateResult monotone_conjugate(const Evaluator& g,
                                   const ConeDescriptor& cone, const Point& y,
                                   double radius, const OptimizerConfig& opt);

/// g** at x, both levels restricted to C ∩ B(0, radius). Divergence of the
/// inner conjugate at a probe z means g*(z) = +inf there; such z contribute
/// -inf to the outer sup and are excluded. The outer result carries the
/// diverged flag only if no usable inner value existed at all.
ConjugateResult biconjugate(const Evaluator& g, const ConeDescriptor& cone,
                            const Point& x, double radius,
                            const OptimizerConfig& opt);

struct FenchelMoreauReport {
  double max_gap = 0.0;
  int samples_used = 0;
  int excluded = 0;  ///< samples dropped because a conjugate level diverged
  double tolerance = 0.0;
  bool pass = false;
};

/// Checks g** = g on sampled cone points for g declared convex, lsc and
/// C*-increasing. Each sample is evaluated at two search radii; disagreement
/// between radii or divergence invalidates the sample (counted, not silent).
FenchelMoreauReport fenchel_moreau_check(const HamiltonianSpec& g,
                                         const ConeDescriptor& cone,
                                         int samples, double tol,
                                         std::uint64_t seed,
                                         const OptimizerConfig& opt);

/// Repeated conjugate evaluation of one g at many points, warm-starting each
/// solve from the previous argmax. Used by the variational solvers, whose
/// outer line searches move the conjugate argument smoothly. reset() drops the
/// warm state; a fresh instance per outer sample keeps runs deterministic.
class ConjugateEvaluator {
 public:
  ConjugateEvaluator(Evaluator g, ConeDescriptor cone, OptimizerConfig opt)
      : g_(std::move(g)), cone_(std::move(cone)), opt_(opt) {}

  ConjugateResult eval(const Point& y, double radius);
  void reset() { has_warm_ = false; }

 private:
  Evaluator g_;
  ConeDescriptor cone_;
  OptimizerConfig opt_;
  Point warm_;
  bool has_warm_ = false;
};

}  // namespace hjcone
