#include "hjcone/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjcone/sampling.hpp"

namespace hjcone {

Point numeric_gradient(const Evaluator& g, const ConeDescriptor& cone,
                       const Point& x) {
  const double h = 1e-6 * (1.0 + norm(cone, x));
  Point grad(x.size()), probe = x;
  for (size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = g(probe);
    probe[i] = x[i] - h;
    const double fm = g(probe);
    probe[i] = x[i];
    grad[i] = (fp - fm) / (2 * h);
  }
  return grad;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shared engine: maximize <w,y> - g(w) over C ∩ B(0, radius).
ConjugateResult solve_conjugate(const Evaluator& g, const ConeDescriptor& cone,
                                const Point& y, double radius,
                                const OptimizerConfig& opt, const Point* warm,
                                bool noisy_objective) {
  auto objective = [&](const Point& w) {
    return inner_product(cone, w, y) - g(w);
  };
  auto proj = section_projector(cone, radius);

  std::vector<Point> starts;
  if (warm) starts.push_back(*warm);
  {
    Point guess = project(cone, y);  // exact maximiser for quadratic-like g
    proj(guess);
    starts.push_back(std::move(guess));
  }
  if (!warm) {
    auto more =
        multistart_points(cone, radius, opt.multistart_count, opt.seed);
    starts.insert(starts.end(), more.begin(), more.end());
  }

  OptResult best = projected_ascent(cone, objective, proj, starts, opt);
  ConjugateResult out;
  if (!best.usable) {  // cannot happen for finite g, but stay defensive
    out.argmax = Point(cone.ambient_dim(), 0.0);
    out.value = objective(out.argmax);
    out.diverged = true;
    return out;
  }
  compass_polish(objective, proj, best.x, best.value, 3,
                 0.05 * (1.0 + norm(cone, best.x)));

  out.value = best.value;
  out.argmax = best.x;
  out.residual = best.residual;

  const double n = norm(cone, out.argmax);
  if (n >= radius * (1.0 - 1e-6)) {
    // radial slope: is the objective still climbing at the search radius?
    const double delta = noisy_objective ? 1e-2 : 1e-4;
    Point inward = out.argmax;
    for (double& c : inward) c *= (1.0 - delta);
    const double fin = objective(inward);
    const double slope = (out.value - fin) / (delta * n);
    if (slope > 1e-6) out.diverged = true;
  }
  return out;
}

}  // namespace

ConjugateResult monotone_conjugate(const Evaluator& g,
                                   const ConeDescriptor& cone, const Point& y,
                                   double radius, const OptimizerConfig& opt) {
  if (!(radius > 0))
    throw std::invalid_argument("monotone_conjugate: radius must be > 0");
  return solve_conjugate(g, cone, y, radius, opt, nullptr, false);
}

ConjugateResult ConjugateEvaluator::eval(const Point& y, double radius) {
  const Point* warm = has_warm_ ? &warm_ : nullptr;
  ConjugateResult r = solve_conjugate(g_, cone_, y, radius, opt_, warm, false);
  warm_ = r.argmax;
  has_warm_ = true;
  return r;
}

ConjugateResult biconjugate(const Evaluator& g, const ConeDescriptor& cone,
                            const Point& x, double radius,
                            const OptimizerConfig& opt) {
  OptimizerConfig inner_cfg = opt;
  inner_cfg.max_iter = std::max(30, opt.max_iter / 2);
  inner_cfg.seed = subseed(opt.seed, "biconjugate.inner");

  // Fresh multistart per inner solve. Warm starting would be cheaper, but g
  // here is an arbitrary user function: a warm iterate parked on an interior
  // local maximiser can mask growth elsewhere in the section, and a masked
  // divergence turns the -inf exclusion below into a wrong finite value.
  auto outer_obj = [&](const Point& z) {
    ConjugateResult r = monotone_conjugate(g, cone, z, radius, inner_cfg);
    if (r.diverged) return -kInf;  // g*(z) = +inf: z contributes nothing
    return inner_product(cone, z, x) - r.value;
  };
  auto proj = section_projector(cone, radius);

  std::vector<Point> starts;
  {
    Point sub = project(cone, numeric_gradient(g, cone, x));  // z* in dg(x)
    proj(sub);
    starts.push_back(std::move(sub));
  }
  {
    Point px = project(cone, x);
    proj(px);
    starts.push_back(std::move(px));
  }
  auto more = multistart_points(cone, radius, opt.multistart_count,
                                subseed(opt.seed, "biconjugate.outer"));
  starts.insert(starts.end(), more.begin(), more.end());

  OptResult best = projected_ascent(cone, outer_obj, proj, starts, opt);
  ConjugateResult out;
  if (!best.usable) {
    // every inner conjugate diverged; report the apex value with the flag
    out.argmax = Point(cone.ambient_dim(), 0.0);
    out.value = -kInf;
    out.diverged = true;
    return out;
  }
  compass_polish(outer_obj, proj, best.x, best.value, 3,
                 0.05 * (1.0 + norm(cone, best.x)));

  out.value = best.value;
  out.argmax = best.x;
  out.residual = best.residual;
  const double n = norm(cone, out.argmax);
  if (n >= radius * (1.0 - 1e-6)) {
    Point inward = out.argmax;
    for (double& c : inward) c *= (1.0 - 1e-2);
    const double fin = outer_obj(inward);
    if (fin > -kInf) {
      const double slope = (out.value - fin) / (1e-2 * n);
      if (slope > 1e-6) out.diverged = true;
    }
  }
  return out;
}

FenchelMoreauReport fenchel_moreau_check(const HamiltonianSpec& g,
                                         const ConeDescriptor& cone,
                                         int samples, double tol,
                                         std::uint64_t seed,
                                         const OptimizerConfig& opt) {
  FenchelMoreauReport rep;
  rep.tolerance = tol;
  Rng rng(subseed(seed, "fenchel_moreau"));

  for (int s = 0; s < samples; ++s) {
    Point x = random_cone_point(cone, rng, 1.5);
    const double xn = norm(cone, x);

    // Search radius: large enough to hold both the inner maximiser (order
    // |x|) and the outer one (a subgradient of g at x).
    double zmax = 2.0 * (xn + 1.0);
    if (g.local_lip) zmax = std::max(zmax, g.local_lip(xn + 1.0) + 1.0);
    double radius = std::max(2.0 * (xn + 1.0), zmax);
    // For superlinear g, widen until the gradient range covers the outer
    // probes. Globally Lipschitz g never satisfies the condition (its
    // gradient range is capped), so the doubling must not run: the inner
    // maximiser then sits at distance O(|x|) already inside the base radius.
    if (g.local_lip && !std::isfinite(g.global_lip)) {
      double w = 1.0;
      for (int i = 0; i < 12 && g.local_lip(w) < zmax + 1.0; ++i) w *= 2.0;
      radius = std::max(radius, w);
    }

    OptimizerConfig cfg = opt;
    cfg.seed = subseed(seed, "fenchel_moreau.sample", s);

    bool excluded = false;
    double worst = 0.0;
    double prev_value = 0.0;
    for (int ri = 0; ri < 2; ++ri) {
      const double r = radius * (ri == 0 ? 1.0 : 2.0);
      ConjugateResult bi = biconjugate(g.evaluator, cone, x, r, cfg);
      if (bi.diverged) {
        excluded = true;
        break;
      }
      if (ri == 1 && std::fabs(bi.value - prev_value) > tol) {
        excluded = true;  // radius-sensitive: treat as an undetected escape
        break;
      }
      prev_value = bi.value;
      worst = std::max(worst, std::fabs(bi.value - g.evaluator(x)));
    }
    if (excluded) {
      ++rep.excluded;
      continue;
    }
    ++rep.samples_used;
    rep.max_gap = std::max(rep.max_gap, worst);
  }
  rep.pass = rep.max_gap <= tol && rep.samples_used > 0;
  return rep;
}

}  // namespace hjcone
