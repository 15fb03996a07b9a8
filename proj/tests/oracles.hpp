#pragma once

// Brute-force reference implementations for the test suite. These are
// deliberately slow and structurally independent of the library's optimizer
// paths: conjugates and variational formulas are evaluated by exhaustive
// lattice search, boundary distances by projected descent over unit dual
// vectors. Tolerances in the tests account for the lattice resolution.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hjcone/cones.hpp"
#include "hjcone/functionals.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone::oracle {

/// Lattice covering C ∩ B(0, radius) with n nodes per axis. Orthant-family
/// cones enumerate [0, radius]^dim; Psd(2) enumerates packed
/// (x11, sqrt(2) x12, x22) boxes and keeps the positive semidefinite points.
inline std::vector<Point> cone_lattice(const ConeDescriptor& cone,
                                       double radius, int n) {
  assert(n >= 2);
  std::vector<Point> out;
  if (cone.is_orthant_family()) {
    const int dim = cone.ambient_dim();
    std::vector<int> idx(static_cast<size_t>(dim), 0);
    const double step = radius / (n - 1);
    while (true) {
      Point x(static_cast<size_t>(dim));
      for (int i = 0; i < dim; ++i) x[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)] * step;
      if (norm(cone, x) <= radius + 1e-12) out.push_back(std::move(x));
      int i = 0;
      for (; i < dim; ++i) {
        if (++idx[static_cast<size_t>(i)] < n) break;
        idx[static_cast<size_t>(i)] = 0;
      }
      if (i == dim) break;
    }
    return out;
  }
  if (cone.kind() == ConeKind::Psd && cone.matrix_dim() == 2) {
    const double step = radius / (n - 1);
    for (int i = 0; i < n; ++i) {
      for (int j = -(n - 1); j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double a = i * step, bp = j * step, c = k * step;
          const double b = bp / std::sqrt(2.0);  // matrix off-diagonal
          if (a * c - b * b < -1e-12) continue;
          Point x = {a, bp, c};
          if (norm(cone, x) <= radius + 1e-12) out.push_back(std::move(x));
        }
      }
    }
    return out;
  }
  throw std::invalid_argument("cone_lattice: unsupported cone " +
                              cone.describe());
}

/// g*(y) = max over the lattice of <x,y> - g(x).
inline double conj_lattice(const std::function<double(const Point&)>& g,
                           const ConeDescriptor& cone, const Point& y,
                           double radius, int n) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Point& x : cone_lattice(cone, radius, n))
    best = std::max(best, inner_product(cone, x, y) - g(x));
  return best;
}

/// g** at x, both suprema over the same lattice-restricted section.
inline double biconj_lattice(const std::function<double(const Point&)>& g,
                             const ConeDescriptor& cone, const Point& x,
                             double radius, int n) {
  const std::vector<Point> zs = cone_lattice(cone, radius, n);
  const std::vector<Point> xs = zs;
  double best = -std::numeric_limits<double>::infinity();
  for (const Point& z : zs) {
    double inner = -std::numeric_limits<double>::infinity();
    for (const Point& xx : xs)
      inner = std::max(inner, inner_product(cone, xx, z) - g(xx));
    best = std::max(best, inner_product(cone, x, z) - inner);
  }
  return best;
}

/// Two-level lattice evaluation of
///   f(t,x) = sup_{y in C} { psi(x+y) - t sup_{w in C} [ <w,y/t> - H(w) ] }.
/// y ranges over C ∩ B(0, y_radius) with ny nodes per axis, w over
/// C ∩ B(0, w_radius) with nw nodes per axis.
inline double hopf_lax_lattice(const std::function<double(const Point&)>& H,
                               const std::function<double(const Point&)>& psi,
                               const ConeDescriptor& cone, double t,
                               const Point& x, double y_radius, int ny,
                               double w_radius, int nw) {
  if (t == 0.0) return psi(x);
  const std::vector<Point> ys = cone_lattice(cone, y_radius, ny);
  const std::vector<Point> ws = cone_lattice(cone, w_radius, nw);
  double best = -std::numeric_limits<double>::infinity();
  Point xy(x.size());
  for (const Point& y : ys) {
    double conj = -std::numeric_limits<double>::infinity();
    for (const Point& w : ws)
      conj = std::max(conj, inner_product(cone, w, y) / t - H(w));
    for (size_t i = 0; i < x.size(); ++i) xy[i] = x[i] + y[i];
    best = std::max(best, psi(xy) - t * conj);
  }
  return best;
}

/// d(x) = inf { <u,x> : u in C*, |u| = 1 } by multistart projected descent on
/// the dual unit sphere (steepest direction -x, re-projected and renormalised
/// each step, geometrically decaying step size).
inline double boundary_distance_sampled(const ConeDescriptor& cone,
                                        const Point& x, std::uint64_t seed,
                                        int starts = 64, int iters = 80) {
  Rng rng(subseed(seed, "boundary-oracle"));
  const double xn = norm(cone, x);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Point u = random_unit_dual(cone, rng);
    double step = 1.0;
    for (int it = 0; it < iters; ++it) {
      Point cand(u.size());
      const double scale = step / (1.0 + xn);
      for (size_t i = 0; i < u.size(); ++i) cand[i] = u[i] - scale * x[i];
      cand = project_dual(cone, cand);
      const double cn = norm(cone, cand);
      if (cn > 1e-14) {
        for (double& v : cand) v /= cn;
        if (inner_product(cone, cand, x) <= inner_product(cone, u, x))
          u = std::move(cand);
        else
          step *= 0.7;
      } else {
        step *= 0.7;
      }
    }
    best = std::min(best, inner_product(cone, u, x));
  }
  return best;
}

/// Closed-form solution of  d/dt f = (f')^2 / 2  on the half line with
/// f(0,x) = min(x, 1): the variational formula gives
///   f(t,x) = x + t/2          for x <= 1 - t,
///            1 - (1-x)^2/(2t) for 1 - t < x < 1,
///            1                for x >= 1.
inline double clipped_linear_solution(double t, double x) {
  if (t == 0.0) return std::min(x, 1.0);
  if (x <= 1.0 - t) return x + t / 2.0;
  if (x < 1.0) return 1.0 - (1.0 - x) * (1.0 - x) / (2.0 * t);
  return 1.0;
}

}  // namespace hjcone::oracle
