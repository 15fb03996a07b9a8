#pragma once

#include <stdexcept>

#include "hjcone/functionals.hpp"

namespace hjcone {

/// Thrown by extend_growing when the adaptive search radius caps out without
/// the minimiser detaching from the ball: H is not coercive enough for the
/// growing modification.
struct NonCoercive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Value at x of the canonical monotone extension
///   F(x) = inf { H(y) : y in C, y - x in C* }.
/// For globally Lipschitz C*-increasing H this extension satisfies F = H on C
/// and ||F||_Lip = ||H restricted to C||_Lip, and it preserves convexity and
/// nonnegativity. On orthant-family cones the feasible set has least element
/// P_C(x), so F(x) = H(P_C(x)); otherwise a multistart projected-gradient
/// descent over C ∩ (x + C*) is used, seeded with the always-feasible P_C(x).
double extend_lipschitz_monotone(const HamiltonianSpec& H,
                                 const ConeDescriptor& cone, const Point& x,
                                 const OptimizerConfig& opt);

/// Same inf-formula for merely locally Lipschitz H with superlinear growth:
/// the feasible set is capped at radius 2(1+|x|), doubled (up to 2^10 times)
/// until the minimiser sits strictly inside the ball. Throws NonCoercive at
/// the cap.
double extend_growing(const HamiltonianSpec& H, const ConeDescriptor& cone,
                      const Point& x, const OptimizerConfig& opt);

/// Clip-and-extend: replaces H outside a slab by an affine function of <v,x>
/// (v the canonical interior point), keeping it unchanged on C ∩ B(0, R), then
/// applies the inf-extension. The result is globally Lipschitz, C*-increasing,
/// agrees with H on C ∩ B(0, R), and preserves convexity and nonnegativity.
/// Fitted constants are exposed for tests.
struct ClipConstants {
  double equiv = 0.0;  ///< c with |x|/c <= <v,x> <= c |x| on C (sampled fit)
  double r = 0.0;      ///< slab parameter, 1.1 x the minimal admissible value
  double L = 0.0;      ///< Lipschitz constant of H on the slab <v,x> <= 2r
  double slope = 0.0;  ///< 2 L c, the slope coefficient of the affine branch
};

HamiltonianSpec clip_and_extend(const HamiltonianSpec& H,
                                const ConeDescriptor& cone, double R,
                                const OptimizerConfig& opt,
                                ClipConstants* out_constants = nullptr);

/// Scenario-facing wrapper: "lip" | "clip" | "growing". For "clip" the radius
/// is the agreement radius R; the other methods ignore it.
HamiltonianSpec make_extension(const HamiltonianSpec& H,
                               const ConeDescriptor& cone,
                               const std::string& method, double radius,
                               const OptimizerConfig& opt);

}  // namespace hjcone
