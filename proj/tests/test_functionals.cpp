#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjcone/functionals.hpp"
#include "hjcone/registry.hpp"
#include "hjcone/sampling.hpp"
#include "oracles.hpp"

using namespace hjcone;

namespace {

OptimizerConfig opt_cfg(std::uint64_t seed) {
  OptimizerConfig o;
  o.seed = seed;
  return o;
}

EvaluatorParams vec_p(const std::vector<double>& p) {
  EvaluatorParams e;
  e.vectors["p"] = p;
  return e;
}

}  // namespace

TEST_CASE("numeric gradient of a smooth function") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const Evaluator g = [](const Point& x) {
    return x[0] * x[0] + 3.0 * x[0] * x[1];
  };
  const Point grad = numeric_gradient(g, cone, {1.0, 2.0});
  CHECK(grad[0] == doctest::Approx(2.0 + 6.0).epsilon(1e-5));
  CHECK(grad[1] == doctest::Approx(3.0).epsilon(1e-5));
}

TEST_CASE("monotone conjugate of the half-line quadratic: frozen values") {
  const ConeDescriptor cone = ConeDescriptor::orthant(1);
  const Evaluator g = [](const Point& x) { return 0.5 * x[0] * x[0]; };
  // sup_{x>=0} { 2x - x^2/2 } = 2 at x = 2
  ConjugateResult r = monotone_conjugate(g, cone, {2.0}, 8.0, opt_cfg(1));
  CHECK(!r.diverged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.argmax[0] == doctest::Approx(2.0).epsilon(1e-4));
  // sup_{x>=0} { -x - x^2/2 } = 0 at x = 0 (negative slopes pin the corner)
  r = monotone_conjugate(g, cone, {-1.0}, 8.0, opt_cfg(1));
  CHECK(!r.diverged);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.argmax[0] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("conjugate of the quadratic is the squared projected positive part") {
  // sup_{x in C} <x,y> - |x|^2/2 = |P_C(y)|^2 / 2 on self-dual cones
  for (const ConeDescriptor& cone :
       {ConeDescriptor::orthant(2), ConeDescriptor::psd(2)}) {
    CAPTURE(cone.describe());
    Rng rng(subseed(3, "conj-quad"));
    const Evaluator g = [&cone](const Point& x) {
      return 0.5 * inner_product(cone, x, x);
    };
    for (int trial = 0; trial < 10; ++trial) {
      const Point y = random_gaussian(rng, cone.ambient_dim());
      const Point py = project(cone, y);
      const double expected = 0.5 * inner_product(cone, py, py);
      const ConjugateResult r =
          monotone_conjugate(g, cone, y, 4.0 + norm(cone, y), opt_cfg(trial));
      CHECK(!r.diverged);
      CHECK(r.value == doctest::Approx(expected).epsilon(2e-6));
    }
  }
}

TEST_CASE("conjugate values match the lattice oracle") {
  const ConeDescriptor o2 = ConeDescriptor::orthant(2);
  const Evaluator g = [&o2](const Point& x) {
    return 0.5 * inner_product(o2, x, x) + 0.3 * x[0];
  };
  for (const Point& y : {Point{1.0, 0.5}, Point{2.0, -1.0}, Point{0.0, 0.0}}) {
    const double lib = monotone_conjugate(g, o2, y, 6.0, opt_cfg(5)).value;
    const double brute = oracle::conj_lattice(g, o2, y, 6.0, 301);
    CHECK(lib == doctest::Approx(brute).epsilon(5e-4));
  }

  const ConeDescriptor psd = ConeDescriptor::psd(2);
  const Evaluator gp = [&psd](const Point& x) {
    return inner_product(psd, x, x);
  };
  const Point y = {1.0, 0.4, 0.2};
  const double lib = monotone_conjugate(gp, psd, y, 3.0, opt_cfg(6)).value;
  const double brute = oracle::conj_lattice(gp, psd, y, 3.0, 61);
  CHECK(std::fabs(lib - brute) <= 2e-3 * (1.0 + std::fabs(lib)));
}

TEST_CASE("divergence detection on a bounded nonlinearity") {
  const ConeDescriptor cone = ConeDescriptor::orthant(1);
  const Evaluator g = [](const Point& x) { return std::min(x[0], 1.0); };
  // slope 1/2 beats the bounded growth: sup is +inf
  ConjugateResult r = monotone_conjugate(g, cone, {0.5}, 64.0, opt_cfg(2));
  CHECK(r.diverged);
  // negative slope: sup attained at 0 with value 0
  r = monotone_conjugate(g, cone, {-0.5}, 64.0, opt_cfg(2));
  CHECK(!r.diverged);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("biconjugate: convex functions are recovered, bounded ones collapse") {
  const ConeDescriptor cone = ConeDescriptor::orthant(1);
  const Evaluator quad = [](const Point& x) { return 0.5 * x[0] * x[0]; };
  for (double x : {0.0, 0.5, 1.5, 3.0}) {
    const ConjugateResult r = biconjugate(quad, cone, {x}, 8.0, opt_cfg(4));
    CHECK(!r.diverged);
    CHECK(r.value == doctest::Approx(0.5 * x * x).epsilon(1e-5));
  }
  // min(x,1): every slope z > 0 diverges in the limit, so the full monotone
  // biconjugate collapses to 0. At a finite search radius R the restricted
  // conjugate is max(0, Rz - 1): slopes below 1/R are honestly finite there,
  // and the restricted biconjugate at x = 2 equals exactly 2/R. Check that
  // value, its decay in R, and domination by the original function.
  const Evaluator clip = [](const Point& x) { return std::min(x[0], 1.0); };
  const ConjugateResult r64 = biconjugate(clip, cone, {2.0}, 64.0, opt_cfg(4));
  CHECK(r64.value == doctest::Approx(2.0 / 64.0).epsilon(1e-3));
  const ConjugateResult r256 = biconjugate(clip, cone, {2.0}, 256.0, opt_cfg(4));
  CHECK(r256.value == doctest::Approx(2.0 / 256.0).epsilon(1e-3));
  CHECK(r256.value <= std::min(2.0, 1.0) + 1e-9);
}

TEST_CASE("biconjugate matches the lattice oracle on the orthant") {
  const ConeDescriptor o1 = ConeDescriptor::orthant(1);
  const Evaluator g = [](const Point& x) {
    return x[0] * x[0] - 0.5 * x[0];  // convex, not monotone near 0
  };
  for (double x : {0.0, 0.4, 1.0, 2.0}) {
    const double lib = biconjugate(g, o1, {x}, 6.0, opt_cfg(8)).value;
    const double brute = oracle::biconj_lattice(g, o1, {x}, 6.0, 601);
    CHECK(lib == doctest::Approx(brute).epsilon(2e-3));
  }
}

TEST_CASE("Young-Fenchel inequality holds on samples") {
  for (const ConeDescriptor& cone :
       {ConeDescriptor::orthant(2), ConeDescriptor::psd(2)}) {
    const Evaluator g = [&cone](const Point& x) {
      return inner_product(cone, x, x);
    };
    Rng rng(subseed(9, "yf"));
    for (int trial = 0; trial < 20; ++trial) {
      const Point x = random_cone_point(cone, rng, 2.0);
      const Point y = random_gaussian(rng, cone.ambient_dim());
      const ConjugateResult r =
          monotone_conjugate(g, cone, y, 6.0 + norm(cone, y), opt_cfg(trial));
      if (r.diverged) continue;
      CHECK(g(x) + r.value >= inner_product(cone, x, y) - 1e-8);
    }
  }
}

TEST_CASE("conjugation reverses order") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const Evaluator lo = [&cone](const Point& x) {
    return 0.5 * inner_product(cone, x, x);
  };
  const Evaluator hi = [&cone](const Point& x) {
    return inner_product(cone, x, x);
  };
  Rng rng(subseed(10, "order"));
  for (int trial = 0; trial < 10; ++trial) {
    const Point y = random_gaussian(rng, 2);
    const double clo = monotone_conjugate(lo, cone, y, 6.0, opt_cfg(trial)).value;
    const double chi = monotone_conjugate(hi, cone, y, 6.0, opt_cfg(trial)).value;
    CHECK(clo >= chi - 1e-8);
  }
}

TEST_CASE("restricted biconjugate is dominated by the function") {
  const ConeDescriptor cone = ConeDescriptor::psd(2);
  const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
  Rng rng(subseed(12, "dom"));
  for (int trial = 0; trial < 6; ++trial) {
    const Point x = random_cone_point(cone, rng, 1.5);
    const double R = norm(cone, x) + 2.0;
    const ConjugateResult r = biconjugate(H.evaluator, cone, x, R, opt_cfg(trial));
    CHECK(r.value <= H.evaluator(x) + 1e-6 * (1.0 + std::fabs(H.evaluator(x))));
  }
}

TEST_CASE("Fenchel-Moreau equality for declared-convex monotone functions") {
  for (const ConeDescriptor& cone :
       {ConeDescriptor::orthant(1), ConeDescriptor::orthant(2),
        ConeDescriptor::psd(2)}) {
    CAPTURE(cone.describe());
    const HamiltonianSpec g = make_hamiltonian("quadratic", {}, cone);
    const FenchelMoreauReport rep =
        fenchel_moreau_check(g, cone, 6, 1e-3, 99, opt_cfg(99));
    CHECK(rep.pass);
    CHECK(rep.samples_used > 0);
    CHECK(rep.max_gap <= 1e-3);
  }
}

TEST_CASE("Fenchel-Moreau for the linear form (wedge-corner argmax)") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const HamiltonianSpec g = make_hamiltonian("linear", vec_p({1.0, 2.0}), cone);
  const FenchelMoreauReport rep =
      fenchel_moreau_check(g, cone, 6, 1e-3, 21, opt_cfg(21));
  CHECK(rep.pass);
}

TEST_CASE("registry metadata is exact") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const HamiltonianSpec q = make_hamiltonian("quadratic", {}, cone);
  CHECK(q.flags.convex_on_C);
  CHECK(q.flags.monotone_on_C);
  CHECK(q.flags.nonneg_on_C);
  CHECK(q.lower_bound == 0.0);
  CHECK(q.local_lip(3.0) == doctest::Approx(3.0));
  CHECK(std::isinf(q.global_lip));

  EvaluatorParams shift;
  shift.scalars["offset"] = -1.0;
  const HamiltonianSpec qs = make_hamiltonian("quadratic", shift, cone);
  CHECK(!qs.flags.nonneg_on_C);
  CHECK(qs.lower_bound == -1.0);

  const InitialConditionSpec lin = make_initial("linear", vec_p({3.0, 4.0}), cone);
  CHECK(lin.lip == doctest::Approx(std::sqrt(9.0 + 16.0)));
  CHECK(lin.flags.convex_on_C);
  CHECK(lin.flags.monotone_on_C);

  // p outside the dual cone: not monotone
  const HamiltonianSpec bad = make_hamiltonian("linear", vec_p({-1.0, 1.0}), cone);
  CHECK(!bad.flags.monotone_on_C);

  EvaluatorParams clip = vec_p({1.0, 1.0});
  clip.scalars["clip"] = 1.0;
  clip.strings["mode"] = "min";
  const HamiltonianSpec mc = make_hamiltonian("affine_clip", clip, cone);
  CHECK(mc.flags.monotone_on_C);
  CHECK(!mc.flags.convex_on_C);
  clip.strings["mode"] = "max";
  const HamiltonianSpec xc = make_hamiltonian("affine_clip", clip, cone);
  CHECK(xc.flags.convex_on_C);
  CHECK(xc.global_lip == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS((void)make_hamiltonian("hopf2", {}, cone),
                  std::invalid_argument);
  EvaluatorParams junk;
  junk.scalars["bogus"] = 1.0;
  CHECK_THROWS_AS((void)make_hamiltonian("quadratic", junk, cone),
                  std::invalid_argument);
  CHECK(registry_names().size() == 4);
}

TEST_CASE("linear forms on the product cone use the weighted pairing") {
  const ConeDescriptor prod = ConeDescriptor::product(
      {ConeDescriptor::orthant(1), ConeDescriptor::orthant(1)}, {0.5, 0.5});
  const HamiltonianSpec lin = make_hamiltonian("linear", vec_p({1.0, 1.0}), prod);
  CHECK(lin.evaluator({1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(lin.global_lip == doctest::Approx(1.0));
}

TEST_CASE("warm-started conjugate evaluation matches cold evaluation") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const Evaluator g = [&cone](const Point& x) {
    return 0.5 * inner_product(cone, x, x);
  };
  ConjugateEvaluator warm(g, cone, opt_cfg(31));
  Rng rng(subseed(31, "warm"));
  for (int trial = 0; trial < 12; ++trial) {
    const Point y = {rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 3.0)};
    const double w = warm.eval(y, 8.0).value;
    const double c = monotone_conjugate(g, cone, y, 8.0, opt_cfg(31)).value;
    CHECK(w == doctest::Approx(c).epsilon(1e-7));
  }
}
