#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hjcone/extension.hpp"
#include "hjcone/registry.hpp"
#include "hjcone/sampling.hpp"

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

TEST_CASE("inf-extension frozen values on orthants") {
  // F(x) = inf { H(y) : y >= 0, y >= x } = H(x_+) on the orthant family
  const ConeDescriptor o1 = ConeDescriptor::orthant(1);
  const HamiltonianSpec h1 = make_hamiltonian("linear", vec_p({1.0}), o1);
  CHECK(extend_lipschitz_monotone(h1, o1, {-2.0}, opt_cfg(1)) ==
        doctest::Approx(0.0));
  CHECK(extend_lipschitz_monotone(h1, o1, {3.0}, opt_cfg(1)) ==
        doctest::Approx(3.0));

  const ConeDescriptor o2 = ConeDescriptor::orthant(2);
  const HamiltonianSpec h2 = make_hamiltonian("linear", vec_p({1.0, 1.0}), o2);
  CHECK(extend_lipschitz_monotone(h2, o2, {-1.0, 2.0}, opt_cfg(1)) ==
        doctest::Approx(2.0));
}

TEST_CASE("inf-extension on the psd cone via descent matches the projection value") {
  // For H = <p,.> with p = identity, the minimal-trace point of
  // { y psd, y - x psd } is the positive part of x.
  const ConeDescriptor psd = ConeDescriptor::psd(2);
  const HamiltonianSpec h = make_hamiltonian("linear", vec_p({1.0, 0.0, 1.0}), psd);
  Rng rng(subseed(2, "psd-ext"));
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = random_gaussian(rng, 3);
    const Point px = project(psd, x);
    const double expected = px[0] + px[2];  // trace of the positive part
    const double got = extend_lipschitz_monotone(h, psd, x, opt_cfg(trial));
    CHECK(got == doctest::Approx(expected).epsilon(2e-5));
  }
}

TEST_CASE("growing modification of a coercive nonlinearity") {
  const ConeDescriptor o1 = ConeDescriptor::orthant(1);
  const HamiltonianSpec h = make_hamiltonian("norm2sq", {}, o1);
  CHECK(extend_growing(h, o1, {-1.0}, opt_cfg(3)) == doctest::Approx(0.0));
  CHECK(extend_growing(h, o1, {2.0}, opt_cfg(3)) == doctest::Approx(4.0));

  const ConeDescriptor psd = ConeDescriptor::psd(2);
  const HamiltonianSpec hp = make_hamiltonian("norm2sq", {}, psd);
  Rng rng(subseed(4, "grow"));
  for (int trial = 0; trial < 6; ++trial) {
    const Point x = random_cone_point(psd, rng, 1.5);
    // agreement on the cone
    CHECK(extend_growing(hp, psd, x, opt_cfg(trial)) ==
          doctest::Approx(hp.evaluator(x)).epsilon(2e-5));
  }
}

TEST_CASE("clip-and-extend agrees with H inside the slab radius") {
  for (const ConeDescriptor& cone :
       {ConeDescriptor::orthant(2), ConeDescriptor::psd(2)}) {
    CAPTURE(cone.describe());
    const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
    ClipConstants consts;
    const HamiltonianSpec F = clip_and_extend(H, cone, 2.0, opt_cfg(5), &consts);
    CHECK(consts.equiv >= 1.0);
    CHECK(consts.L > 0.0);
    CHECK(consts.slope >= consts.L);
    CHECK(std::isfinite(F.global_lip));
    Rng rng(subseed(5, "clip"));
    int inside = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const Point x = random_cone_point(cone, rng, 2.0);
      if (norm(cone, x) > 2.0) continue;
      ++inside;
      CHECK(F.evaluator(x) ==
            doctest::Approx(H.evaluator(x)).epsilon(1e-6));
    }
    CHECK(inside > 10);
  }
}

TEST_CASE("clip-and-extend is Lipschitz with at most 1% inflation") {
  const ConeDescriptor cone = ConeDescriptor::orthant(2);
  const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
  const double R = 2.0;
  ClipConstants consts;
  const HamiltonianSpec F = clip_and_extend(H, cone, R, opt_cfg(6), &consts);
  // reference: Lipschitz constant of H on the fitted slab
  const double Lref = consts.L;
  // the affine outer branch y -> H0 + slope (<v,y> - r) has gradient
  // slope * v, so the declared constant is max(L, slope |v|)
  const double vnorm = norm(cone, interior_point(cone));
  CHECK(F.global_lip ==
        doctest::Approx(std::max(consts.L, consts.slope * vnorm)));
  Rng rng(subseed(6, "clip-lip"));
  double max_quot = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const Point a = random_gaussian(rng, 2);
    Point b = a;
    const Point dir = random_gaussian(rng, 2);
    const double eps = 0.05 + rng.uniform();
    for (size_t i = 0; i < b.size(); ++i) b[i] += eps * dir[i];
    Point d(a.size());
    for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    const double dn = norm(cone, d);
    if (dn < 1e-9) continue;
    max_quot = std::max(
        max_quot, std::fabs(F.evaluator(a) - F.evaluator(b)) / dn);
  }
  // the affine outer branch has slope 2 L c; sampled quotients must stay
  // within 1% of the declared constant
  CHECK(max_quot <= 1.01 * F.global_lip);
  // the slab constant covers at least the ball of radius 2r
  CHECK(Lref >= H.local_lip(2.0 * consts.r) - 1e-12);
}

TEST_CASE("extensions preserve monotonicity, convexity and nonnegativity") {
  for (const ConeDescriptor& cone :
       {ConeDescriptor::orthant(2), ConeDescriptor::psd(2)}) {
    CAPTURE(cone.describe());
    const HamiltonianSpec H = make_hamiltonian("quadratic", {}, cone);
    const HamiltonianSpec F = make_extension(H, cone, "clip", 2.0, opt_cfg(7));
    Rng rng(subseed(7, "shape"));
    for (int trial = 0; trial < 80; ++trial) {
      const Point x = random_gaussian(rng, cone.ambient_dim());
      const Point w = project_dual(cone, random_gaussian(rng, cone.ambient_dim()));
      Point xw(x.size()), y = random_gaussian(rng, cone.ambient_dim());
      Point mid(x.size());
      for (size_t i = 0; i < x.size(); ++i) {
        xw[i] = x[i] + w[i];
        mid[i] = 0.5 * (x[i] + y[i]);
      }
      const double fx = F.evaluator(x);
      // monotone: adding a dual-cone vector cannot decrease the value
      CHECK(F.evaluator(xw) >= fx - 1e-7 * (1.0 + std::fabs(fx)));
      // convex: midpoint rule
      const double lhs = F.evaluator(mid);
      const double rhs = 0.5 * (fx + F.evaluator(y));
      CHECK(lhs <= rhs + 1e-7 * (1.0 + std::fabs(rhs)));
      // nonnegative (H >= 0 on C)
      CHECK(fx >= -1e-9);
    }
  }
}

TEST_CASE("extension method dispatch") {
  const ConeDescriptor cone = ConeDescriptor::orthant(1);
  const HamiltonianSpec H = make_hamiltonian("linear", vec_p({2.0}), cone);
  const HamiltonianSpec lip = make_extension(H, cone, "lip", 0.0, opt_cfg(8));
  CHECK(lip.evaluator({-1.0}) == doctest::Approx(0.0));
  CHECK(lip.evaluator({1.0}) == doctest::Approx(2.0));
  const HamiltonianSpec grow = make_extension(H, cone, "growing", 0.0, opt_cfg(8));
  CHECK(grow.evaluator({-1.0}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(
      (void)make_extension(H, cone, "mystery", 0.0, opt_cfg(8)),
      std::invalid_argument);
}
