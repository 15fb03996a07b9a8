#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hjcone/functionals.hpp"

namespace hjcone {

/// Uniform grid on the truncated cone [0, extent]^dim, spacing h, horizon T.
/// Only orthant-family cones in dimension 1 or 2 are supported.
struct GridSpec {
  int dim = 1;
  double extent = 0.0;
  double h = 0.0;
  double T = 0.0;
  double cfl = 0.5;  ///< must lie in (0,1)

  int nodes_per_axis() const;  ///< includes both endpoints
  bool operator==(const GridSpec&) const = default;
};

struct FdResult {
  GridSpec grid;
  std::vector<double> field;  ///< row-major over the node lattice
  int steps = 0;
  double dt = 0.0;
  std::vector<double> axis_alpha;  ///< per-axis dissipation coefficients

  double at(int i) const { return field[static_cast<size_t>(i)]; }
  double at(int i, int j) const;  ///< 2-d access, i along axis 0
};

/// Explicit monotone Lax-Friedrichs march for d/dt f = H(grad f), f(0,.)=psi.
/// Update: f += dt [ H(avg one-sided gradients) + sum_i (alpha_i/2)(p+_i - p-_i) ]
/// with alpha_i = L / sqrt(a_i), L = H.global_lip (must be finite: pass an
/// extended Hamiltonian). One-sided differences at the cone faces and at the
/// outer truncation use linear-extrapolation ghost values. dt = cfl h / sum_i
/// alpha_i (the final step is shortened to land exactly on T). Throws on CFL
/// or dimension violations and aborts loudly if the field turns non-finite.
FdResult solve_fd(const HamiltonianSpec& H_ext, const InitialConditionSpec& psi,
                  const ConeDescriptor& cone, const GridSpec& grid);

struct ResidualSample {
  double t = 0.0;
  Point x;
  double residual = 0.0;
  bool smooth_stable = false;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;  ///< all probed points, flagged
  int reported = 0;                     ///< smooth-stable count
  int filtered = 0;
  double max_abs_residual = 0.0;  ///< over the smooth-stable points only
};

/// Central-difference residual d/dt f - H(grad f) of a field sampler at the
/// given (t,x). Points where the gradient estimate at h and h/2 disagree by
/// 10h or more (a kink or optimizer noise) are filtered, not reported.
ResidualReport residual_check(
    const std::function<double(double, const Point&)>& f,
    const HamiltonianSpec& H, const ConeDescriptor& cone,
    const std::vector<std::pair<double, Point>>& points, double h);

}  // namespace hjcone
