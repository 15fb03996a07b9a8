#include "hjcone/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "hjcone/extension.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

/// Record v into a running max; non-finite values poison the check.
void bump(double& maxv, double v) {
  if (!std::isfinite(v))
    maxv = kInf;
  else
    maxv = std::max(maxv, v);
}

double rel(double diff, double scale) { return diff / (1.0 + std::fabs(scale)); }

const std::vector<std::pair<std::string, std::string>>& property_table() {
  static const std::vector<std::pair<std::string, std::string>> t = {
      {"geometry",
       "cone geometry: projection optimality, Moreau decomposition, "
       "self-duality, boundary distance"},
      {"conjugation",
       "monotone conjugation: Young-Fenchel, order reversal, double-conjugate "
       "domination, Fenchel-Moreau identity"},
      {"extension",
       "extensions agree with H on the cone and preserve Lipschitz, monotone, "
       "convex and nonnegative structure"},
      {"initial_condition", "the solution attains the initial condition at t = 0"},
      {"lipschitz", "the spatial Lipschitz seminorm of f(t,.) equals that of psi"},
      {"temporal_lipschitz",
       "the time Lipschitz constant is bounded by sup |H| over the gradient "
       "section"},
      {"lp_lipschitz",
       "every l^p Lipschitz seminorm is preserved on product cones"},
      {"spatial_monotonicity", "f(t,.) is C*-increasing for every t"},
      {"temporal_monotonicity",
       "f(.,x) is nondecreasing in t when H >= 0 on the cone"},
      {"perron", "the solution sits between the barriers psi -+ K t"},
      {"semigroup", "advancing s -> t from f(s,.) reproduces f(t,.)"},
      {"cross_formula",
       "Hopf-Lax and Hopf values agree when both data are convex"},
      {"modification_invariance",
       "the solution depends on H only through its values on the cone"},
      {"comparison", "ordered initial data give ordered solutions"},
  };
  return t;
}

std::string property_of(const std::string& suite) {
  for (const auto& [s, p] : property_table())
    if (s == suite) return p;
  return "";
}

CheckReport fresh_report(const std::string& suite, const std::string& name,
                         const Scenario& sc) {
  CheckReport r;
  r.check_name = name;
  r.property = property_of(suite);
  r.seed = subseed(sc.seed, "verify." + name);
  return r;
}

CheckReport skipped_report(const std::string& suite, const std::string& name,
                           const Scenario& sc, const std::string& reason) {
  CheckReport r = fresh_report(suite, name, sc);
  r.skipped = true;
  r.skip_reason = reason;
  return r;
}

/// Value memo for one (solver, formula): verify suites revisit the same
/// (t, x) many times.
class FieldCache {
 public:
  FieldCache(const VariationalSolver& solver, Formula formula)
      : solver_(&solver), formula_(formula) {}

  double value(double t, const Point& x) {
    std::vector<double> key;
    key.reserve(x.size() + 1);
    key.push_back(t);
    key.insert(key.end(), x.begin(), x.end());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const SolutionSample s = formula_ == Formula::Hopf ? solver_->hopf(t, x)
                                                       : solver_->hopf_lax(t, x);
    const double v = s.diverged && !std::isfinite(s.value)
                         ? std::numeric_limits<double>::quiet_NaN()
                         : s.value;
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  const VariationalSolver* solver_;
  Formula formula_;
  std::map<std::vector<double>, double> cache_;
};

struct Ctx {
  const Scenario* sc = nullptr;
  ConeDescriptor cone = ConeDescriptor::orthant(1);
  HamiltonianSpec H;
  InitialConditionSpec psi;
  std::vector<Point> pts;
  std::vector<double> times;  ///< ascending
};

Ctx make_ctx(const Scenario& sc) {
  Ctx c;
  c.sc = &sc;
  c.cone = sc.cone;
  c.H = sc.make_hamiltonian_spec();
  c.psi = sc.make_initial_spec();
  c.pts = sc.eval_points();
  c.times = sc.times;
  std::sort(c.times.begin(), c.times.end());
  return c;
}

std::vector<std::pair<Formula, std::string>> selected_formulas(const Scenario& sc) {
  std::vector<std::pair<Formula, std::string>> out;
  if (sc.formula == "hopf_lax" || sc.formula == "both")
    out.emplace_back(Formula::HopfLax, "hopf_lax");
  if (sc.formula == "hopf" || sc.formula == "both")
    out.emplace_back(Formula::Hopf, "hopf");
  return out;
}

/// Same section-growing policy the solvers use for conjugate evaluations.
double conj_radius_for(const HamiltonianSpec& H, double znorm) {
  double W = 1.0 + znorm;
  if (H.local_lip) {
    for (int d = 0; d < 12 && H.local_lip(W) < znorm + 1.0; ++d) W *= 2.0;
  } else {
    W = 4.0 * (1.0 + znorm);
  }
  return 2.0 * W;
}

OptimizerConfig seeded_opt(const Scenario& sc, const std::string& tag) {
  OptimizerConfig o = sc.optimizer;
  o.seed = subseed(sc.seed, tag);
  return o;
}

// ------------------------------------------------------------------ geometry

void suite_geometry(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();

  {  // projection optimality: <x - Px, w - Px> <= 0 for all w in C
    CheckReport r = fresh_report("geometry", "geometry.projection_optimality", sc);
    Timer tm;
    r.tolerance = 1e-8;
    Rng rng(r.seed);
    for (int s = 0; s < 48; ++s) {
      const Point x = random_gaussian(rng, dim);
      Point px = project(c.cone, x);
      if (!contains(c.cone, px, 1e-7)) bump(r.max_violation, kInf);
      for (int k = 0; k < 8; ++k) {
        const Point w = random_cone_point(c.cone, rng, 1.5);
        double ip = 0;
        Point d1(dim), d2(dim);
        for (int i = 0; i < dim; ++i) {
          d1[i] = x[i] - px[i];
          d2[i] = w[i] - px[i];
        }
        ip = inner_product(c.cone, d1, d2);
        bump(r.max_violation, rel(ip, norm(c.cone, x) * norm(c.cone, w)));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // Moreau: x = P_C(x) - P_{C*}(-x), the two parts orthogonal
    CheckReport r = fresh_report("geometry", "geometry.moreau_decomposition", sc);
    Timer tm;
    r.tolerance = 1e-9;
    Rng rng(r.seed);
    for (int s = 0; s < 64; ++s) {
      const Point x = random_gaussian(rng, dim);
      const Point px = project(c.cone, x);
      Point mx(dim);
      for (int i = 0; i < dim; ++i) mx[i] = -x[i];
      const Point qx = project_dual(c.cone, mx);
      Point recon(dim), diff(dim);
      for (int i = 0; i < dim; ++i) {
        recon[i] = px[i] - qx[i];
        diff[i] = x[i] - recon[i];
      }
      bump(r.max_violation, rel(norm(c.cone, diff), norm(c.cone, x)));
      bump(r.max_violation,
           rel(std::fabs(inner_product(c.cone, px, qx)),
               norm(c.cone, px) * norm(c.cone, qx)));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // self-duality: P_{C*} = P_C on these cones
    CheckReport r = fresh_report("geometry", "geometry.self_duality", sc);
    Timer tm;
    r.tolerance = 1e-9;
    Rng rng(r.seed);
    for (int s = 0; s < 64; ++s) {
      const Point x = random_gaussian(rng, dim);
      const Point a = project(c.cone, x);
      const Point b = project_dual(c.cone, x);
      Point d(dim);
      for (int i = 0; i < dim; ++i) d[i] = a[i] - b[i];
      bump(r.max_violation, rel(norm(c.cone, d), norm(c.cone, x)));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // <x, y> >= 0 for x in C, y in C*
    CheckReport r = fresh_report("geometry", "geometry.dual_pairing_nonneg", sc);
    Timer tm;
    r.tolerance = 1e-9;
    Rng rng(r.seed);
    for (int s = 0; s < 64; ++s) {
      const Point x = random_cone_point(c.cone, rng, 1.5);
      Point y = random_gaussian(rng, dim);
      y = project_dual(c.cone, y);
      bump(r.max_violation,
           rel(-inner_product(c.cone, x, y), norm(c.cone, x) * norm(c.cone, y)));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // closed-form boundary distance vs the generic multistart route
    CheckReport r =
        fresh_report("geometry", "geometry.boundary_distance_agreement", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    for (int s = 0; s < 24; ++s) {
      const Point x = s % 2 ? random_interior_point(c.cone, rng, 1.0)
                            : random_cone_point(c.cone, rng, 1.0);
      const double d1 = boundary_distance(c.cone, x);
      const double d2 = boundary_distance_multistart(c.cone, x, 32,
                                                     subseed(r.seed, "ms", s));
      bump(r.max_violation, rel(std::fabs(d1 - d2), norm(c.cone, x)));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // d(x) is an inf over unit dual directions: every sample certifies d <= <u,x>
    CheckReport r =
        fresh_report("geometry", "geometry.boundary_distance_certificate", sc);
    Timer tm;
    r.tolerance = 1e-9;
    Rng rng(r.seed);
    for (int s = 0; s < 24; ++s) {
      const Point x = random_cone_point(c.cone, rng, 1.2);
      const double d = boundary_distance(c.cone, x);
      for (int k = 0; k < 16; ++k) {
        const Point u = random_unit_dual(c.cone, rng);
        bump(r.max_violation, rel(d - inner_product(c.cone, u, x), norm(c.cone, x)));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

// --------------------------------------------------------------- conjugation

void suite_conjugation(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  const Evaluator& g = c.H.evaluator;

  {  // Young-Fenchel: g(x) + g*(y) >= <x,y>
    CheckReport r = fresh_report("conjugation", "conjugation.young_fenchel", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    const OptimizerConfig opt = seeded_opt(sc, "verify.young_fenchel.opt");
    for (int s = 0; s < 16; ++s) {
      const Point y = random_cone_point(c.cone, rng, 1.0);
      const ConjugateResult cr = monotone_conjugate(
          g, c.cone, y, conj_radius_for(c.H, norm(c.cone, y)), opt);
      if (cr.diverged) continue;  // g*(y) = +inf: inequality is vacuous
      for (int k = 0; k < 4; ++k) {
        const Point x = random_cone_point(c.cone, rng, 1.5);
        const double lhs = g(x) + cr.value;
        const double rhs = inner_product(c.cone, x, y);
        bump(r.max_violation, rel(rhs - lhs, rhs));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // order reversal, exact form: (g + a)* = g* - a
    CheckReport r = fresh_report("conjugation", "conjugation.order_reversal", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    const OptimizerConfig opt = seeded_opt(sc, "verify.order_reversal.opt");
    const double shift = 0.25;
    Evaluator g2 = [&g, shift](const Point& p) { return g(p) + shift; };
    for (int s = 0; s < 10; ++s) {
      const Point y = random_cone_point(c.cone, rng, 1.0);
      const double R = conj_radius_for(c.H, norm(c.cone, y));
      const ConjugateResult a = monotone_conjugate(g, c.cone, y, R, opt);
      const ConjugateResult b = monotone_conjugate(g2, c.cone, y, R, opt);
      if (a.diverged || b.diverged) continue;
      bump(r.max_violation, rel(std::fabs(a.value - b.value - shift), a.value));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // g** <= g pointwise (any g)
    CheckReport r =
        fresh_report("conjugation", "conjugation.double_conjugate_dominated", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    const OptimizerConfig opt = seeded_opt(sc, "verify.biconjugate.opt");
    for (int s = 0; s < 6; ++s) {
      const Point x = random_cone_point(c.cone, rng, 1.25);
      const ConjugateResult cr =
          biconjugate(g, c.cone, x, 6.0 * (1.0 + norm(c.cone, x)), opt);
      if (cr.diverged) continue;
      bump(r.max_violation, rel(cr.value - g(x), g(x)));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // Fenchel-Moreau identity for convex monotone g
    const std::string name = "conjugation.fenchel_moreau";
    if (!c.H.flags.convex_on_C || !c.H.flags.monotone_on_C) {
      out.push_back(skipped_report(
          "conjugation", name, sc,
          "needs a Hamiltonian declared convex and C*-increasing"));
    } else {
      CheckReport r = fresh_report("conjugation", name, sc);
      Timer tm;
      r.tolerance = 1e-3;
      const OptimizerConfig opt = seeded_opt(sc, "verify.fenchel_moreau.opt");
      const FenchelMoreauReport fm =
          fenchel_moreau_check(c.H, c.cone, 8, r.tolerance, r.seed, opt);
      r.max_violation = fm.max_gap;
      r.samples_used = fm.samples_used;
      r.pass = fm.pass;
      r.elapsed_s = tm.elapsed();
      out.push_back(std::move(r));
    }
  }
  (void)dim;
}

// ----------------------------------------------------------------- extension

void suite_extension(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  const HamiltonianSpec F = sc.make_extended_hamiltonian();
  const bool clip = sc.extension.method == "clip";
  const double agree_R = clip ? 0.999 * sc.extension.radius : 2.0;

  {  // F = H on the cone (clip: on the agreement ball)
    CheckReport r = fresh_report("extension", "extension.agreement_on_cone", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    for (int s = 0; s < 48; ++s) {
      Point x = random_cone_point(c.cone, rng, agree_R);
      const double n = norm(c.cone, x);
      if (clip && n > agree_R && n > 0)
        for (double& v : x) v *= agree_R / n;
      const double h = c.H.evaluator(x);
      bump(r.max_violation, rel(std::fabs(F.evaluator(x) - h), h));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // F is C*-increasing on the ambient space
    CheckReport r = fresh_report("extension", "extension.monotone", sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    for (int s = 0; s < 24; ++s) {
      const Point x = random_gaussian(rng, dim);
      const double fx = F.evaluator(x);
      for (int k = 0; k < 2; ++k) {
        Point w = random_cone_point(c.cone, rng, 0.7);
        Point xw(dim);
        for (int i = 0; i < dim; ++i) xw[i] = x[i] + w[i];
        bump(r.max_violation, rel(fx - F.evaluator(xw), fx));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {  // global Lipschitz bound of the extension
    const std::string name = "extension.lipschitz";
    if (!std::isfinite(F.global_lip)) {
      out.push_back(skipped_report("extension", name, sc,
                                   "extension carries no global Lipschitz "
                                   "constant (growing modification)"));
    } else {
      CheckReport r = fresh_report("extension", name, sc);
      Timer tm;
      r.tolerance = 0.01;  // 1% inflation allowance
      Rng rng(r.seed);
      for (int s = 0; s < 24; ++s) {
        const Point a = random_gaussian(rng, dim);
        Point b = random_gaussian(rng, dim);
        for (int i = 0; i < dim; ++i) b[i] = a[i] + 0.5 * b[i];
        Point d(dim);
        for (int i = 0; i < dim; ++i) d[i] = a[i] - b[i];
        const double dn = norm(c.cone, d);
        if (dn < 1e-9) continue;
        const double ratio = std::fabs(F.evaluator(a) - F.evaluator(b)) / dn;
        bump(r.max_violation, ratio / F.global_lip - 1.0);
        ++r.samples_used;
      }
      r.max_violation = std::max(r.max_violation, 0.0);
      r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
      r.elapsed_s = tm.elapsed();
      out.push_back(std::move(r));
    }
  }

  {  // convexity preserved
    const std::string name = "extension.preserves_convexity";
    if (!c.H.flags.convex_on_C) {
      out.push_back(
          skipped_report("extension", name, sc, "H is not declared convex"));
    } else {
      CheckReport r = fresh_report("extension", name, sc);
      Timer tm;
      r.tolerance = 1e-6;
      Rng rng(r.seed);
      for (int s = 0; s < 16; ++s) {
        const Point a = random_gaussian(rng, dim);
        const Point b = random_gaussian(rng, dim);
        Point m(dim);
        for (int i = 0; i < dim; ++i) m[i] = 0.5 * (a[i] + b[i]);
        const double fa = F.evaluator(a), fb = F.evaluator(b),
                     fm = F.evaluator(m);
        bump(r.max_violation, rel(fm - 0.5 * (fa + fb), 0.5 * (fa + fb)));
        ++r.samples_used;
      }
      r.pass = r.max_violation <= r.tolerance;
      r.elapsed_s = tm.elapsed();
      out.push_back(std::move(r));
    }
  }

  {  // nonnegativity preserved
    const std::string name = "extension.preserves_nonneg";
    if (!c.H.flags.nonneg_on_C) {
      out.push_back(skipped_report("extension", name, sc,
                                   "H is not declared nonnegative on the cone"));
    } else {
      CheckReport r = fresh_report("extension", name, sc);
      Timer tm;
      r.tolerance = 1e-7;
      Rng rng(r.seed);
      for (int s = 0; s < 32; ++s) {
        const Point x = random_gaussian(rng, dim);
        bump(r.max_violation, rel(-F.evaluator(x), 0.0));
        ++r.samples_used;
      }
      r.max_violation = std::max(r.max_violation, 0.0);
      r.pass = r.max_violation <= r.tolerance;
      r.elapsed_s = tm.elapsed();
      out.push_back(std::move(r));
    }
  }
}

// --------------------------------------------------------- solution invariants

void suite_initial_condition(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "initial_condition." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("initial_condition", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("initial_condition", name, sc);
    Timer tm;
    r.tolerance = formula == Formula::HopfLax ? 0.0 : 1e-3;
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    for (const Point& x : c.pts) {
      const double v = f.value(0.0, x);
      const double p = c.psi.evaluator(x);
      bump(r.max_violation, rel(std::fabs(v - p), p));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_lipschitz(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  const double lip = c.psi.lip;
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("lipschitz", "lipschitz.upper." + fname, sc,
                                   "Hopf needs convex initial data"));
      out.push_back(skipped_report("lipschitz", "lipschitz.lower." + fname, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    if (lip <= 0) {
      out.push_back(skipped_report("lipschitz", "lipschitz.upper." + fname, sc,
                                   "initial condition has zero Lipschitz "
                                   "constant"));
      out.push_back(skipped_report("lipschitz", "lipschitz.lower." + fname, sc,
                                   "initial condition has zero Lipschitz "
                                   "constant"));
      continue;
    }
    CheckReport up = fresh_report("lipschitz", "lipschitz.upper." + fname, sc);
    CheckReport lo = fresh_report("lipschitz", "lipschitz.lower." + fname, sc);
    Timer tm;
    up.tolerance = 0.05;
    lo.tolerance = 0.05;
    Rng rng(up.seed);
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    double best_ratio_floor = kInf;  // per-t sampled sup, min over t
    for (double t : c.times) {
      double sup_ratio = 0.0;
      for (const Point& x : c.pts) {
        if (!contains(c.cone, x, 1e-7)) continue;
        const double fx = f.value(t, x);
        std::vector<Point> partners;
        {  // directed along the data gradient: witnesses the sup for our psi
          Point gpsi = project(c.cone,
                               numeric_gradient(c.psi.evaluator, c.cone, x));
          const double gn = norm(c.cone, gpsi);
          if (gn > 1e-9) {
            Point p(dim);
            for (int i = 0; i < dim; ++i) p[i] = x[i] + 0.4 * gpsi[i] / gn;
            partners.push_back(std::move(p));
          }
        }
        for (int k = 0; k < 5; ++k) {
          const Point w = random_cone_point(c.cone, rng, 0.4);
          Point p(dim);
          for (int i = 0; i < dim; ++i) p[i] = x[i] + w[i];
          partners.push_back(std::move(p));
        }
        for (const Point& y : partners) {
          Point d(dim);
          for (int i = 0; i < dim; ++i) d[i] = y[i] - x[i];
          const double dn = norm(c.cone, d);
          if (dn < 1e-9) continue;
          const double ratio = std::fabs(f.value(t, y) - fx) / dn;
          bump(up.max_violation, ratio / lip - 1.0);
          sup_ratio = std::max(sup_ratio, ratio);
          ++up.samples_used;
          ++lo.samples_used;
        }
      }
      best_ratio_floor = std::min(best_ratio_floor, sup_ratio);
    }
    up.max_violation = std::max(up.max_violation, 0.0);
    up.pass = up.max_violation <= up.tolerance && up.samples_used > 0;
    lo.max_violation = std::isfinite(best_ratio_floor)
                           ? std::max(0.0, 1.0 - best_ratio_floor / lip)
                           : kInf;
    lo.pass = lo.max_violation <= lo.tolerance && lo.samples_used > 0;
    up.elapsed_s = tm.elapsed();
    lo.elapsed_s = up.elapsed_s;
    out.push_back(std::move(up));
    out.push_back(std::move(lo));
  }
}

void suite_temporal_lipschitz(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "temporal_lipschitz." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("temporal_lipschitz", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("temporal_lipschitz", name, sc);
    Timer tm;
    r.tolerance = 0.05;
    Rng rng(r.seed);
    // sampled sup of |H| over the gradient section C ∩ B(0, lip)
    const double lip = std::max(c.psi.lip, 1e-9);
    double M = std::fabs(c.H.evaluator(Point(dim, 0.0)));
    for (int s = 0; s < 64; ++s) {
      Point u = random_cone_point(c.cone, rng, 1.0);
      const double un = norm(c.cone, u);
      if (un < 1e-12) continue;
      const double scale = lip * (s % 2 ? 1.0 : rng.uniform());
      for (double& v : u) v *= scale / un;
      M = std::max(M, std::fabs(c.H.evaluator(u)));
    }
    std::vector<std::pair<double, double>> tpairs;
    for (size_t i = 0; i + 1 < c.times.size(); ++i)
      if (c.times[i + 1] > c.times[i])
        tpairs.emplace_back(c.times[i], c.times[i + 1]);
    if (tpairs.empty())
      tpairs.emplace_back(c.times.front(), c.times.front() + 0.25);
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    for (const auto& [t1, t2] : tpairs) {
      for (const Point& x : c.pts) {
        const double diff = std::fabs(f.value(t2, x) - f.value(t1, x));
        bump(r.max_violation, diff / (M * (t2 - t1)) - 1.0);
        ++r.samples_used;
      }
    }
    r.max_violation = std::max(r.max_violation, 0.0);
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_lp_lipschitz(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  if (c.cone.kind() != ConeKind::Product) {
    out.push_back(skipped_report("lp_lipschitz", "lp_lipschitz", sc,
                                 "needs a product cone"));
    return;
  }
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "lp_lipschitz." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("lp_lipschitz", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("lp_lipschitz", name, sc);
    Timer tm;
    r.tolerance = 0.10;
    Rng rng(r.seed);
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    // one shared pair set; compare sampled sups for psi and f(t,.)
    std::vector<std::pair<Point, Point>> pairs;
    for (const Point& x : c.pts) {
      if (!contains(c.cone, x, 1e-7)) continue;
      for (int k = 0; k < 6; ++k) {
        const Point w = random_cone_point(c.cone, rng, 0.5);
        Point y(dim);
        for (int i = 0; i < dim; ++i) y[i] = x[i] + w[i];
        pairs.emplace_back(x, std::move(y));
      }
    }
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      double sup_psi = 0.0;
      for (const auto& [a, b] : pairs) {
        Point d(dim);
        for (int i = 0; i < dim; ++i) d[i] = b[i] - a[i];
        const double dn = norm_p(c.cone, d, p);
        if (dn < 1e-9) continue;
        sup_psi = std::max(
            sup_psi, std::fabs(c.psi.evaluator(b) - c.psi.evaluator(a)) / dn);
      }
      if (sup_psi < 1e-12) continue;  // degenerate direction set
      for (double t : c.times) {
        double sup_f = 0.0;
        for (const auto& [a, b] : pairs) {
          Point d(dim);
          for (int i = 0; i < dim; ++i) d[i] = b[i] - a[i];
          const double dn = norm_p(c.cone, d, p);
          if (dn < 1e-9) continue;
          sup_f = std::max(sup_f, std::fabs(f.value(t, b) - f.value(t, a)) / dn);
          ++r.samples_used;
        }
        bump(r.max_violation, std::fabs(sup_f - sup_psi) / sup_psi);
      }
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_spatial_monotonicity(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const int dim = c.cone.ambient_dim();
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "spatial_monotonicity." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("spatial_monotonicity", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("spatial_monotonicity", name, sc);
    Timer tm;
    r.tolerance = 1e-6;
    Rng rng(r.seed);
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    for (double t : c.times) {
      for (const Point& x : c.pts) {
        const double fx = f.value(t, x);
        for (int k = 0; k < 4; ++k) {
          const Point w = random_cone_point(c.cone, rng, 0.5);
          Point y(dim);
          for (int i = 0; i < dim; ++i) y[i] = x[i] + w[i];
          bump(r.max_violation, rel(fx - f.value(t, y), fx));
          ++r.samples_used;
        }
      }
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_temporal_monotonicity(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  if (!c.H.flags.nonneg_on_C) {
    out.push_back(skipped_report("temporal_monotonicity", "temporal_monotonicity",
                                 sc, "needs H >= 0 on the cone"));
    return;
  }
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "temporal_monotonicity." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("temporal_monotonicity", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("temporal_monotonicity", name, sc);
    Timer tm;
    r.tolerance = 1e-6;
    std::vector<std::pair<double, double>> tpairs;
    for (size_t i = 0; i + 1 < c.times.size(); ++i)
      if (c.times[i + 1] > c.times[i])
        tpairs.emplace_back(c.times[i], c.times[i + 1]);
    if (tpairs.empty())
      tpairs.emplace_back(c.times.front(), c.times.front() + 0.25);
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    for (const auto& [t1, t2] : tpairs) {
      for (const Point& x : c.pts) {
        bump(r.max_violation, rel(f.value(t1, x) - f.value(t2, x), f.value(t1, x)));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_perron(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  for (const auto& [formula, fname] : selected_formulas(sc)) {
    const std::string name = "perron." + fname;
    if (formula == Formula::Hopf && !c.psi.flags.convex_on_C) {
      out.push_back(skipped_report("perron", name, sc,
                                   "Hopf needs convex initial data"));
      continue;
    }
    CheckReport r = fresh_report("perron", name, sc);
    Timer tm;
    r.tolerance = 1e-6;
    const VariationalSolver solver = sc.make_solver();
    FieldCache f(solver, formula);
    for (double t : c.times) {
      for (const Point& x : c.pts) {
        const auto [lo, hi] = solver.perron_bounds(t, x);
        const double v = f.value(t, x);
        bump(r.max_violation, rel(lo - v, v));
        bump(r.max_violation, rel(v - hi, v));
        ++r.samples_used;
      }
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_semigroup(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const bool has_hl = sc.formula == "hopf_lax" || sc.formula == "both";
  if (!has_hl) {
    out.push_back(skipped_report("semigroup", "semigroup.two_step", sc,
                                 "needs the Hopf-Lax formula"));
    out.push_back(skipped_report("semigroup", "semigroup.identity", sc,
                                 "needs the Hopf-Lax formula"));
    return;
  }
  const VariationalSolver solver = sc.make_solver();
  FieldCache direct(solver, Formula::HopfLax);
  double tstar = c.times.back();
  if (tstar <= 0) tstar = 0.5;
  const double s_mid = 0.5 * tstar;
  const Evaluator field_s = [&](const Point& x) {
    return const_cast<FieldCache&>(direct).value(s_mid, x);
  };
  const size_t npts = std::min<size_t>(c.pts.size(), 2);

  {
    CheckReport r = fresh_report("semigroup", "semigroup.identity", sc);
    Timer tm;
    r.tolerance = 0.0;
    for (size_t i = 0; i < npts; ++i) {
      const SolutionSample adv =
          solver.semigroup_advance(field_s, s_mid, s_mid, c.pts[i], nullptr);
      bump(r.max_violation, std::fabs(adv.value - field_s(c.pts[i])));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }

  {
    CheckReport r = fresh_report("semigroup", "semigroup.two_step", sc);
    Timer tm;
    r.tolerance = 1e-3;
    OptimizerConfig lean = sc.optimizer;
    lean.multistart_count = std::min(lean.multistart_count, 2);
    lean.max_iter = std::min(lean.max_iter, 25);
    lean.seed = subseed(sc.seed, "verify.semigroup.outer");
    for (size_t i = 0; i < npts; ++i) {
      const SolutionSample adv =
          solver.semigroup_advance(field_s, s_mid, tstar, c.pts[i], &lean);
      const double ref = direct.value(tstar, c.pts[i]);
      bump(r.max_violation, rel(std::fabs(adv.value - ref), ref));
      ++r.samples_used;
    }
    r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
    r.elapsed_s = tm.elapsed();
    out.push_back(std::move(r));
  }
}

void suite_cross_formula(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const std::string name = "cross_formula";
  if (sc.formula != "both") {
    out.push_back(skipped_report("cross_formula", name, sc,
                                 "scenario does not select both formulas"));
    return;
  }
  if (!c.psi.flags.convex_on_C) {
    out.push_back(skipped_report("cross_formula", name, sc,
                                 "Hopf needs convex initial data"));
    return;
  }
  if (!c.H.flags.convex_on_C) {
    out.push_back(skipped_report("cross_formula", name, sc,
                                 "agreement requires a convex Hamiltonian"));
    return;
  }
  CheckReport r = fresh_report("cross_formula", name, sc);
  Timer tm;
  r.tolerance = 1e-3;
  const VariationalSolver solver = sc.make_solver();
  FieldCache hl(solver, Formula::HopfLax);
  FieldCache hp(solver, Formula::Hopf);
  for (double t : c.times) {
    for (const Point& x : c.pts) {
      const double a = hl.value(t, x);
      const double b = hp.value(t, x);
      bump(r.max_violation, rel(std::fabs(a - b), a));
      ++r.samples_used;
    }
  }
  r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
  r.elapsed_s = tm.elapsed();
  out.push_back(std::move(r));
}

void suite_modification_invariance(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const bool has_hl = sc.formula == "hopf_lax" || sc.formula == "both";
  const std::vector<std::string> methods = {"lip", "clip", "growing"};
  if (!has_hl) {
    for (const auto& m : methods)
      out.push_back(skipped_report("modification_invariance",
                                   "modification_invariance." + m, sc,
                                   "needs the Hopf-Lax formula"));
    return;
  }
  const VariationalSolver base = sc.make_solver();
  FieldCache fbase(base, Formula::HopfLax);
  const double R_mod = 4.0 * (1.0 + base.search_radius());

  for (const auto& method : methods) {
    const std::string name = "modification_invariance." + method;
    if (method == "lip" && !std::isfinite(c.H.global_lip)) {
      out.push_back(skipped_report(
          "modification_invariance", name, sc,
          "H is not globally Lipschitz; the plain extension does not apply"));
      continue;
    }
    CheckReport r = fresh_report("modification_invariance", name, sc);
    Timer tm;
    r.tolerance = 1e-5;
    try {
      OptimizerConfig ecfg = seeded_opt(sc, "verify.modification");
      const HamiltonianSpec F =
          make_extension(c.H, c.cone, method, R_mod, ecfg);
      // Same optimizer seed as the base solver: identical search paths up to
      // the off-cone finite-difference probes.
      OptimizerConfig so = sc.optimizer;
      so.seed = subseed(sc.seed, "solver");
      const VariationalSolver mod(F, c.psi, c.cone, so);
      FieldCache fmod(mod, Formula::HopfLax);
      for (double t : c.times) {
        for (const Point& x : c.pts) {
          const double a = fbase.value(t, x);
          const double b = fmod.value(t, x);
          bump(r.max_violation, rel(std::fabs(a - b), a));
          ++r.samples_used;
        }
      }
      r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
      r.elapsed_s = tm.elapsed();
      out.push_back(std::move(r));
    } catch (const NonCoercive& e) {
      out.push_back(skipped_report("modification_invariance", name, sc,
                                   std::string("growing modification "
                                               "inapplicable: ") +
                                       e.what()));
    }
  }
}

void suite_comparison(const Ctx& c, std::vector<CheckReport>& out) {
  const Scenario& sc = *c.sc;
  const std::string name = "comparison.ordered_solutions";
  const bool has_hl = sc.formula == "hopf_lax" || sc.formula == "both";
  if (!has_hl) {
    out.push_back(skipped_report("comparison", name, sc,
                                 "needs the Hopf-Lax formula"));
    return;
  }

  // Derive an ordered partner from the scenario's initial condition:
  // clipping below an affine function gives psi_low <= psi_high pointwise.
  FunctionConfig low = sc.initial, high = sc.initial;
  bool have_pair = false;
  if (sc.initial.name == "linear") {
    low.name = "affine_clip";
    low.params.strings["mode"] = "min";
    double off = 0.0;
    if (auto it = low.params.scalars.find("offset");
        it != low.params.scalars.end())
      off = it->second;
    low.params.scalars["clip"] = off + 1.0;
    low.convex = std::nullopt;  // min-clip is concave-ish; drop any override
    low.lip = sc.initial.lip;
    have_pair = true;
  } else if (sc.initial.name == "affine_clip") {
    std::string mode;
    if (auto it = sc.initial.params.strings.find("mode");
        it != sc.initial.params.strings.end())
      mode = it->second;
    high.name = "linear";
    high.params.strings.erase("mode");
    high.params.scalars.erase("clip");
    high.convex = std::nullopt;
    high.lip = sc.initial.lip;
    if (mode == "min") {
      have_pair = true;  // min(a, clip) <= a
    } else if (mode == "max") {
      std::swap(low, high);  // max(a, clip) >= a
      have_pair = true;
    }
  }
  if (!have_pair) {
    out.push_back(skipped_report("comparison", name, sc,
                                 "no ordered partner available for this "
                                 "initial condition"));
    return;
  }

  CheckReport r = fresh_report("comparison", name, sc);
  Timer tm;
  r.tolerance = 1e-6;
  const HamiltonianSpec H = c.H;
  OptimizerConfig so = sc.optimizer;
  so.seed = subseed(sc.seed, "solver");
  InitialConditionSpec psi_low = make_initial(low.name, low.params, c.cone);
  InitialConditionSpec psi_high = make_initial(high.name, high.params, c.cone);
  if (low.lip) psi_low.lip = *low.lip;
  if (high.lip) psi_high.lip = *high.lip;
  const VariationalSolver s_low(H, psi_low, c.cone, so);
  const VariationalSolver s_high(H, psi_high, c.cone, so);
  FieldCache f_low(s_low, Formula::HopfLax);
  FieldCache f_high(s_high, Formula::HopfLax);

  // premise spot-check: psi_low <= psi_high at the evaluation points
  for (const Point& x : c.pts)
    bump(r.max_violation,
         rel(psi_low.evaluator(x) - psi_high.evaluator(x), psi_high.evaluator(x)));
  for (double t : c.times) {
    for (const Point& x : c.pts) {
      const double a = f_low.value(t, x);
      const double b = f_high.value(t, x);
      bump(r.max_violation, rel(a - b, b));
      ++r.samples_used;
    }
  }
  r.pass = r.max_violation <= r.tolerance && r.samples_used > 0;
  r.elapsed_s = tm.elapsed();
  out.push_back(std::move(r));
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [s, p] : property_table()) out.push_back(s);
  return out;
}

std::vector<std::pair<std::string, std::string>> property_map() {
  return property_table();
}

std::vector<CheckReport> run_suite(const std::string& suite, const Scenario& sc) {
  const Ctx c = make_ctx(sc);
  std::vector<CheckReport> out;
  if (suite == "geometry")
    suite_geometry(c, out);
  else if (suite == "conjugation")
    suite_conjugation(c, out);
  else if (suite == "extension")
    suite_extension(c, out);
  else if (suite == "initial_condition")
    suite_initial_condition(c, out);
  else if (suite == "lipschitz")
    suite_lipschitz(c, out);
  else if (suite == "temporal_lipschitz")
    suite_temporal_lipschitz(c, out);
  else if (suite == "lp_lipschitz")
    suite_lp_lipschitz(c, out);
  else if (suite == "spatial_monotonicity")
    suite_spatial_monotonicity(c, out);
  else if (suite == "temporal_monotonicity")
    suite_temporal_monotonicity(c, out);
  else if (suite == "perron")
    suite_perron(c, out);
  else if (suite == "semigroup")
    suite_semigroup(c, out);
  else if (suite == "cross_formula")
    suite_cross_formula(c, out);
  else if (suite == "modification_invariance")
    suite_modification_invariance(c, out);
  else if (suite == "comparison")
    suite_comparison(c, out);
  else
    throw std::invalid_argument("unknown verify suite: " + suite);
  return out;
}

double compare_fields(const std::vector<std::pair<Point, double>>& a,
                      const std::vector<std::pair<Point, double>>& b,
                      const std::string& mode) {
  if (a.size() != b.size())
    throw std::invalid_argument("compare_fields: fields have different sizes");
  double maxd = 0.0, sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first)
      throw std::invalid_argument("compare_fields: point lists disagree");
    const double d = std::fabs(a[i].second - b[i].second);
    maxd = std::max(maxd, d);
    sq += d * d;
  }
  if (mode == "max") return maxd;
  if (mode == "l2") return std::sqrt(sq);
  throw std::invalid_argument("compare_fields: mode must be \"max\" or \"l2\"");
}

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.skipped && !r.pass) return false;
  return true;
}

}  // namespace hjcone
