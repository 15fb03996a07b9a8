#include "hjcone/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hjcone/sampling.hpp"

namespace hjcone {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* formula_name(Formula f) {
  switch (f) {
    case Formula::HopfLax:
      return "hopf-lax";
    case Formula::Hopf:
      return "hopf";
    case Formula::Semigroup:
      return "semigroup";
    case Formula::FD:
      return "fd";
  }
  return "unknown";
}

struct VariationalSolver::Cache {
  bool has_radius = false;
  double search_radius = 0.0;
  bool radius_capped = false;

  bool has_perron = false;
  double perron_K = 0.0;
};

VariationalSolver::VariationalSolver(HamiltonianSpec H, InitialConditionSpec psi,
                                     ConeDescriptor cone, OptimizerConfig opt)
    : H_(std::move(H)),
      psi_(std::move(psi)),
      cone_(std::move(cone)),
      opt_(opt),
      cache_(std::make_shared<Cache>()) {
  if (!H_.evaluator)
    throw std::invalid_argument("VariationalSolver: missing nonlinearity evaluator");
  if (!psi_.evaluator)
    throw std::invalid_argument("VariationalSolver: missing initial-condition evaluator");
  if (!(psi_.lip >= 0.0) || !std::isfinite(psi_.lip))
    throw std::invalid_argument(
        "VariationalSolver: initial condition needs a finite Lipschitz constant");
}

double VariationalSolver::conjugate_radius(double znorm) const {
  // The sup in H*(z) sits where the slope of H matches |z|; grow the section
  // until the declared local Lipschitz constant clears |z| + 1, then double
  // once more so the argmax is strictly inside. The cap keeps genuinely
  // divergent conjugates (slope never reaching |z|, e.g. linear H) on a
  // finite section where the boundary-slope test flags them.
  double W = 1.0 + znorm;
  if (H_.local_lip) {
    for (int d = 0; d < 12 && H_.local_lip(W) < znorm + 1.0; ++d) W *= 2.0;
  } else {
    W = 4.0 * (1.0 + znorm);
  }
  return 2.0 * W;
}

double VariationalSolver::search_radius() const {
  if (cache_->has_radius) return cache_->search_radius;

  const double lip = psi_.lip;
  double R = std::max(2.0 * lip, 1.0);
  const double cap = R * 1024.0;

  // Rays along which the radial slope of H* is sampled: the canonical
  // interior direction plus a few random cone directions.
  std::vector<Point> rays;
  {
    Point v = interior_point(cone_);
    const double vn = norm(cone_, v);
    for (double& c : v) c /= vn;
    rays.push_back(std::move(v));
    Rng rng(subseed(opt_.seed, "search-radius.rays"));
    for (int i = 0; i < 8; ++i) {
      Point u = random_cone_point(cone_, rng, 1.0);
      const double un = norm(cone_, u);
      if (un < 1e-9) continue;
      for (double& c : u) c /= un;
      rays.push_back(std::move(u));
    }
  }

  OptimizerConfig icfg = opt_;
  icfg.max_iter = std::max(60, opt_.max_iter / 4);
  icfg.seed = subseed(opt_.seed, "search-radius.conjugate");

  bool capped = false;
  for (;;) {
    bool steep_enough = true;
    for (const Point& u : rays) {
      ConjugateEvaluator conj(H_.evaluator, cone_, icfg);
      Point a(u.size()), b(u.size());
      for (size_t i = 0; i < u.size(); ++i) {
        a[i] = 0.5 * R * u[i];
        b[i] = R * u[i];
      }
      const ConjugateResult ra = conj.eval(a, conjugate_radius(0.5 * R));
      const ConjugateResult rb = conj.eval(b, conjugate_radius(R));
      // A divergent conjugate is +inf out there: the outer objective is
      // already -inf beyond this radius along u, nothing more to contain.
      if (ra.diverged || rb.diverged) continue;
      const double slope = (rb.value - ra.value) / (0.5 * R);
      if (!(slope > lip + 1.0)) {
        steep_enough = false;
        break;
      }
    }
    if (steep_enough) break;
    if (R >= cap) {
      capped = true;
      break;
    }
    R *= 2.0;
  }

  cache_->search_radius = R;
  cache_->radius_capped = capped;
  cache_->has_radius = true;
  return R;
}

SolutionSample VariationalSolver::semigroup_advance(
    const Evaluator& field_s, double s, double t, const Point& x,
    const OptimizerConfig* outer_cfg) const {
  if (static_cast<int>(x.size()) != cone_.ambient_dim())
    throw std::invalid_argument("semigroup_advance: point has wrong dimension");
  if (!(t >= s)) throw std::invalid_argument("semigroup_advance: needs t >= s");

  const int dim = cone_.ambient_dim();
  const double tau = t - s;

  SolutionSample out;
  out.t = t;
  out.x = x;
  out.formula = Formula::Semigroup;
  out.argmax = Point(dim, 0.0);

  if (tau == 0.0) {
    out.value = field_s(x);
    return out;
  }

  const double R = search_radius();
  const OptimizerConfig ocfg = outer_cfg ? *outer_cfg : opt_;

  OptimizerConfig icfg = opt_;
  icfg.max_iter = std::max(60, opt_.max_iter / 4);
  icfg.seed = subseed(opt_.seed, "hopf-lax.inner");
  ConjugateEvaluator conj(H_.evaluator, cone_, icfg);

  // Search in v = y / tau: f = sup_{v in C} { f_s(x + tau v) - tau H*(v) }.
  // Beyond R the radial slope of H* beats lip + 1, so the sup lives in the
  // section C ∩ B(0, R) whatever tau is.
  bool last_inner_diverged = false;
  Point xy(dim);
  auto obj = [&](const Point& v) -> double {
    const ConjugateResult r = conj.eval(v, conjugate_radius(norm(cone_, v)));
    last_inner_diverged = r.diverged;
    if (r.diverged) return -kInf;
    for (int i = 0; i < dim; ++i) xy[i] = x[i] + tau * v[i];
    return field_s(xy) - tau * r.value;
  };
  auto proj = section_projector(cone_, R);

  // Heuristic start: where the envelope is smooth the maximiser satisfies
  // grad H*(v) = grad f_s(x + tau v), i.e. v = grad H(grad f_s) to first
  // order. Exact for linear data with smooth H.
  Point gf = project(cone_, numeric_gradient(field_s, cone_, x));
  Point v0 = project(cone_, numeric_gradient(H_.evaluator, cone_, gf));

  std::vector<Point> starts;
  if (outer_cfg && ocfg.multistart_count == 0) {
    // An explicit zero from the override means the caller pays dearly per
    // field sample: run only the two structured anchors, the smooth-envelope
    // heuristic and the apex.
    starts.push_back(v0);
    starts.emplace_back(dim, 0.0);
  } else {
    starts = multistart_points(cone_, R, ocfg.multistart_count,
                               subseed(opt_.seed, "hopf-lax.outer"), &v0);
  }
  OptResult res = projected_ascent(cone_, obj, proj, starts, ocfg);
  if (res.usable)
    compass_polish(obj, proj, res.x, res.value, 3,
                   0.05 * (1.0 + norm(cone_, res.x)));

  if (!res.usable) {
    out.value = -kInf;
    out.diverged = true;
    return out;
  }

  out.value = res.value;
  out.residual = res.residual;
  for (int i = 0; i < dim; ++i) out.argmax[i] = tau * res.x[i];

  if (cache_->radius_capped) out.diverged = true;
  // Re-evaluate at the winner so the inner flag refers to the argmax.
  (void)obj(res.x);
  if (last_inner_diverged) out.diverged = true;

  // Outward growth at a pinned maximiser means the containment radius did
  // not actually contain the sup.
  const double vn = norm(cone_, res.x);
  if (vn >= R * (1.0 - 1e-4) && vn > 0) {
    const double delta = 1e-2 * (1.0 + R);
    Point vout(dim);
    for (int i = 0; i < dim; ++i) vout[i] = res.x[i] * (1.0 + delta / vn);
    const double fout = obj(vout);
    if (fout > -kInf &&
        fout > res.value + 1e-6 * delta * (1.0 + std::fabs(res.value)))
      out.diverged = true;
  }
  return out;
}

SolutionSample VariationalSolver::hopf_lax(double t, const Point& x) const {
  if (static_cast<int>(x.size()) != cone_.ambient_dim())
    throw std::invalid_argument("hopf_lax: point has wrong dimension");
  if (t < 0) throw std::invalid_argument("hopf_lax: needs t >= 0");

  if (t == 0.0) {
    SolutionSample out;
    out.t = 0.0;
    out.x = x;
    out.value = psi_.evaluator(x);
    out.argmax = Point(cone_.ambient_dim(), 0.0);
    out.formula = Formula::HopfLax;
    return out;
  }
  SolutionSample out = semigroup_advance(psi_.evaluator, 0.0, t, x, nullptr);
  out.formula = Formula::HopfLax;
  return out;
}

SolutionSample VariationalSolver::hopf(double t, const Point& x) const {
  if (static_cast<int>(x.size()) != cone_.ambient_dim())
    throw std::invalid_argument("hopf: point has wrong dimension");
  if (t < 0) throw std::invalid_argument("hopf: needs t >= 0");
  if (!psi_.flags.convex_on_C)
    throw std::invalid_argument("hopf: initial condition must be declared convex");

  const int dim = cone_.ambient_dim();

  if (t == 0.0) {
    // The formula's t = 0 value is psi**(x), and the declared convexity this
    // solver requires makes psi** = psi identically. Evaluating psi directly
    // keeps the t = 0 section exact instead of within optimizer tolerance.
    SolutionSample out;
    out.t = 0.0;
    out.x = x;
    out.formula = Formula::Hopf;
    out.value = psi_.evaluator(x);
    out.argmax = project(cone_, numeric_gradient(psi_.evaluator, cone_, x));
    return out;
  }

  const double Rz = psi_.lip;  // dom psi* sits inside B(0, lip)

  OptimizerConfig icfg = opt_;
  icfg.max_iter = std::max(60, opt_.max_iter / 4);
  icfg.seed = subseed(opt_.seed, "hopf.inner");
  ConjugateEvaluator conj(psi_.evaluator, cone_, icfg);
  // psi* needs its sup near w ~ x shifted by t-dependent motion; this radius
  // dominates both with a wide margin, and the boundary-slope test inside
  // the conjugate still flags the genuinely divergent directions.
  const double W = 16.0 * (1.0 + norm(cone_, x) + t);

  auto obj = [&](const Point& z) -> double {
    const ConjugateResult r = conj.eval(z, W);
    if (r.diverged) return -kInf;  // psi*(z) = +inf: z outside dom psi*
    return inner_product(cone_, z, x) - r.value + t * H_.evaluator(z);
  };
  auto proj = section_projector(cone_, Rz);

  // grad psi(x) is a subgradient selection; for smooth-enough psi it is the
  // maximiser outright.
  Point z0 = project(cone_, numeric_gradient(psi_.evaluator, cone_, x));
  const std::vector<Point> starts = multistart_points(
      cone_, Rz, opt_.multistart_count, subseed(opt_.seed, "hopf.outer"), &z0);
  OptResult res = projected_ascent(cone_, obj, proj, starts, opt_);
  if (res.usable)
    compass_polish(obj, proj, res.x, res.value, 3,
                   0.05 * (1.0 + norm(cone_, res.x)));

  SolutionSample out;
  out.t = t;
  out.x = x;
  out.formula = Formula::Hopf;
  out.argmax = Point(dim, 0.0);
  if (!res.usable) {
    out.value = -kInf;
    out.diverged = true;
    return out;
  }
  out.value = res.value;
  out.argmax = res.x;
  out.residual = res.residual;
  // A maximiser on |z| = lip is legitimate here (that is where the gradient
  // constraint saturates), so no radius flag.
  return out;
}

std::pair<double, double> VariationalSolver::perron_bounds(double t,
                                                           const Point& x) const {
  if (static_cast<int>(x.size()) != cone_.ambient_dim())
    throw std::invalid_argument("perron_bounds: point has wrong dimension");
  if (t < 0) throw std::invalid_argument("perron_bounds: needs t >= 0");

  if (!cache_->has_perron) {
    const int dim = cone_.ambient_dim();
    const double Rclip = std::max(psi_.lip, 1e-6);
    OptimizerConfig ecfg = opt_;
    ecfg.seed = subseed(opt_.seed, "perron.extension");
    const HamiltonianSpec F = clip_and_extend(H_, cone_, Rclip, ecfg, nullptr);

    // K bounds |F| on the gradient ball B(0, lip): cone rays at the rim plus
    // ambient ball samples (envelope gradients can graze the boundary).
    Rng rng(subseed(opt_.seed, "perron.samples"));
    double m = std::fabs(F.evaluator(Point(dim, 0.0)));
    for (int i = 0; i < 64; ++i) {
      Point u = random_cone_point(cone_, rng, 1.0);
      const double un = norm(cone_, u);
      if (un < 1e-12) continue;
      for (double& c : u) c *= Rclip / un;
      m = std::max(m, std::fabs(F.evaluator(u)));
    }
    for (int i = 0; i < 448; ++i) {
      Point u = random_gaussian(rng, dim);
      const double un = norm(cone_, u);
      if (un < 1e-12) continue;
      const double r = Rclip * std::pow(rng.uniform(), 1.0 / dim);
      for (double& c : u) c *= r / un;
      m = std::max(m, std::fabs(F.evaluator(u)));
    }
    cache_->perron_K = 1.1 * m;
    cache_->has_perron = true;
  }

  const double base = psi_.evaluator(x);
  const double K = cache_->perron_K;
  return {base - K * t, base + K * t};
}

SolutionSample hopf_lax(const HamiltonianSpec& H, const InitialConditionSpec& psi,
                        const ConeDescriptor& cone, double t, const Point& x,
                        const OptimizerConfig& opt) {
  return VariationalSolver(H, psi, cone, opt).hopf_lax(t, x);
}

SolutionSample hopf(const HamiltonianSpec& H, const InitialConditionSpec& psi,
                    const ConeDescriptor& cone, double t, const Point& x,
                    const OptimizerConfig& opt) {
  return VariationalSolver(H, psi, cone, opt).hopf(t, x);
}

std::pair<double, double> perron_bounds(const HamiltonianSpec& H,
                                        const InitialConditionSpec& psi,
                                        const ConeDescriptor& cone, double t,
                                        const Point& x,
                                        const OptimizerConfig& opt) {
  return VariationalSolver(H, psi, cone, opt).perron_bounds(t, x);
}

}  // namespace hjcone
