#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hjcone/cones.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone {

/// Budget and determinism knobs for the projected-gradient machinery.
/// Everything downstream (conjugates, variational formulas, the verify
/// harness) draws its randomness from seed, so reruns are bit-identical.
struct OptimizerConfig {
  int multistart_count = 8;  ///< random starts added to the structured ones
  int max_iter = 120;
  double step_tol = 1e-10;
  double value_tol = 1e-12;
  std::uint64_t seed = 0;
};

struct OptResult {
  Point x;
  double value = -std::numeric_limits<double>::infinity();
  double residual = 0.0;  ///< ||P(x + k g) - x|| / k at the final iterate
  int iterations = 0;
  bool usable = false;  ///< false when every start had objective -inf
};

namespace detail {
inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

/// Projected gradient ascent with central finite-difference gradients
/// (h = 1e-6 (1+|x|)), Armijo backtracking on the projected step, and
/// multistart. Objectives may return -inf to mark infeasible ground; probes
/// falling there degrade to one-sided differences. Ties between starts
/// (values within 1e-9 relative) resolve to the smaller-norm argmax.
template <class Obj, class Proj>
OptResult projected_ascent(const ConeDescriptor& cone, Obj&& obj, Proj&& proj,
                           const std::vector<Point>& starts,
                           const OptimizerConfig& cfg) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int dim = cone.ambient_dim();
  OptResult best;
  Point g(dim), probe(dim), xnew(dim);

  auto fd_gradient = [&](const Point& x, double fx) {
    const double h = 1e-6 * (1.0 + norm(cone, x));
    for (int i = 0; i < dim; ++i) {
      probe = x;
      probe[i] = x[i] + h;
      const double fp = obj(probe);
      probe[i] = x[i] - h;
      const double fm = obj(probe);
      if (fp > -kInf && fm > -kInf) {
        g[i] = (fp - fm) / (2 * h);
      } else if (fp > -kInf) {
        g[i] = (fp - fx) / h;
      } else if (fm > -kInf) {
        g[i] = (fx - fm) / h;
      } else {
        g[i] = 0.0;
      }
    }
  };

  int stale_starts = 0;
  int start_index = 0;
  for (const Point& x0 : starts) {
    ++start_index;
    // Random starts stop early once they stop helping; the structured ones
    // (apex, interior rays) always run.
    if (start_index > 8 && stale_starts >= 6) break;

    Point x = x0;
    proj(x);
    double fx = obj(x);
    if (fx == -kInf) {
      ++stale_starts;
      continue;
    }

    double step = 0.5 * (1.0 + norm(cone, x));
    int iters = 0;
    int flat = 0;
    for (; iters < cfg.max_iter; ++iters) {
      fd_gradient(x, fx);
      double gnorm = std::sqrt(detail::dot(g, g));
      if (gnorm == 0) break;

      bool accepted = false;
      double t = step;
      for (int bt = 0; bt < 30; ++bt) {
        for (int i = 0; i < dim; ++i) xnew[i] = x[i] + t * g[i];
        proj(xnew);
        double fnew = obj(xnew);
        if (fnew > -kInf) {
          double model = 0;
          for (int i = 0; i < dim; ++i) model += g[i] * (xnew[i] - x[i]);
          if (fnew >= fx + 1e-4 * model && fnew >= fx) {
            double dx = 0;
            for (int i = 0; i < dim; ++i) {
              double d = xnew[i] - x[i];
              dx += d * d;
            }
            dx = std::sqrt(dx);
            const double gain = fnew - fx;
            x = xnew;
            fx = fnew;
            accepted = true;
            step = std::min(t * 2.0, 8.0 * (1.0 + norm(cone, x)));
            if (dx <= cfg.step_tol * (1.0 + norm(cone, x))) iters = cfg.max_iter;
            flat = (gain <= cfg.value_tol * (1.0 + std::fabs(fx))) ? flat + 1 : 0;
            if (flat >= 2) iters = cfg.max_iter;
            break;
          }
        }
        t *= 0.5;
      }
      if (!accepted) break;  // no ascent within the backtracking budget
    }

    const bool better =
        fx > best.value + 1e-9 * (1.0 + std::fabs(best.value)) ||
        (std::fabs(fx - best.value) <= 1e-9 * (1.0 + std::fabs(best.value)) &&
         best.usable && norm(cone, x) < norm(cone, best.x));
    if (!best.usable || better) {
      if (best.usable &&
          fx <= best.value + 1e-9 * (1.0 + std::fabs(best.value)))
        ++stale_starts;
      else
        stale_starts = 0;
      // residual: how far a small gradient step escapes the feasible set
      fd_gradient(x, fx);
      const double kappa = 1e-5 * (1.0 + norm(cone, x));
      double gn = std::sqrt(detail::dot(g, g));
      double r = 0;
      if (gn > 0) {
        for (int i = 0; i < dim; ++i) probe[i] = x[i] + kappa * (g[i] / gn);
        proj(probe);
        double d = 0;
        for (int i = 0; i < dim; ++i) {
          double e = probe[i] - x[i];
          d += e * e;
        }
        r = std::sqrt(d) / kappa * gn;
      }
      best.x = std::move(x);
      best.value = fx;
      best.iterations = iters;
      best.residual = r;
      best.usable = true;
      x = Point(dim);
    } else {
      ++stale_starts;
    }
  }
  return best;
}

/// Axis-aligned pattern search polish. Projected gradient cannot slide along
/// the -inf walls that divergent inner problems carve out of the feasible
/// set; a few compass rounds can (exactly so on orthant wedges), and they
/// sharpen corner maximisers generally.
template <class Obj, class Proj>
void compass_polish(Obj&& obj, Proj&& proj, Point& x, double& fx, int rounds,
                    double step0) {
  const size_t dim = x.size();
  std::vector<double> step(dim, step0);
  Point cand(dim);
  for (int r = 0; r < rounds; ++r) {
    bool moved = false;
    for (size_t i = 0; i < dim; ++i) {
      for (int halvings = 0; halvings < 18; ++halvings) {
        bool ok = false;
        for (double sgn : {1.0, -1.0}) {
          cand = x;
          cand[i] += sgn * step[i];
          proj(cand);
          const double fc = obj(cand);
          if (fc > fx + 1e-15 * (1.0 + std::fabs(fx))) {
            x = cand;
            fx = fc;
            ok = true;
            moved = true;
            break;
          }
        }
        if (ok) {
          step[i] *= 1.6;
          break;
        }
        step[i] *= 0.5;
      }
    }
    if (!moved) break;
  }
}

/// Projector for the section C ∩ B(0, radius): cone projection followed by a
/// radial clip (exact, since the residual x - P_C(x) is orthogonal to P_C(x)).
inline auto section_projector(const ConeDescriptor& cone, double radius) {
  return [&cone, radius](Point& x) {
    x = project(cone, x);
    const double n = norm(cone, x);
    if (n > radius && n > 0) {
      const double s = radius / n;
      for (double& c : x) c *= s;
    }
  };
}

/// Approximate projector for C ∩ (base + C*) ∩ B(0, radius) by alternating
/// projections. base + P_C(base) is always feasible (Moreau), so starts can be
/// seeded exactly; the alternation only has to repair small excursions.
inline auto shifted_dual_projector(const ConeDescriptor& cone, Point base,
                                   double radius, int rounds = 10) {
  return [&cone, base = std::move(base), radius, rounds](Point& z) {
    for (int r = 0; r < rounds; ++r) {
      z = project(cone, z);
      Point w(z.size());
      for (size_t i = 0; i < z.size(); ++i) w[i] = z[i] - base[i];
      w = project_dual(cone, w);
      for (size_t i = 0; i < z.size(); ++i) z[i] = base[i] + w[i];
      const double n = norm(cone, z);
      if (n > radius && n > 0) {
        const double s = radius / n;
        for (double& c : z) c *= s;
      }
    }
    z = project(cone, z);
  };
}

/// Structured multistart set: apex, scaled interior-direction rays, and
/// seeded random cone points inside B(0, radius). extra (when given) is
/// prepended, e.g. a warm start or a known feasible point.
std::vector<Point> multistart_points(const ConeDescriptor& cone, double radius,
                                     int random_count, std::uint64_t seed,
                                     const Point* extra = nullptr);

}  // namespace hjcone
