#include "hjcone/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjcone/sampling.hpp"

namespace hjcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_monotone(const HamiltonianSpec& H, const char* who) {
  if (!H.flags.monotone_on_C)
    throw std::invalid_argument(std::string(who) +
                                ": H must be declared C*-increasing");
}

struct ShiftedMin {
  double value = kInf;
  Point argmin;
  bool capped = false;
};

/// min of Heval over C ∩ (x + C*) ∩ B(0, rho), rho doubled while the
/// minimiser stays pinned to the ball. P_C(x) is feasible for every x
/// (Moreau), which seeds the search and certifies nonempty feasibility.
ShiftedMin minimize_shifted(const Evaluator& Heval, const ConeDescriptor& cone,
                            const Point& x, const OptimizerConfig& opt,
                            double rho0, int max_doublings) {
  ShiftedMin out;
  double rho = std::max(rho0, 2.0 * norm(cone, project(cone, x)) + 1.0);
  for (int d = 0;; ++d) {
    auto proj = shifted_dual_projector(cone, x, rho);
    auto obj = [&](const Point& y) { return -Heval(y); };

    std::vector<Point> starts;
    Point pcx = project(cone, x);
    starts.push_back(pcx);
    Rng rng(subseed(opt.seed, "extend.starts", static_cast<std::uint64_t>(d)));
    const int extra = std::max(3, opt.multistart_count / 2);
    for (int i = 0; i < extra; ++i) {
      Point p = pcx;
      Point g = random_gaussian(rng, cone.ambient_dim());
      const double sc = 0.5 * (1.0 + norm(cone, pcx)) * rng.uniform();
      for (size_t k = 0; k < p.size(); ++k) p[k] += sc * g[k];
      starts.push_back(std::move(p));
    }

    OptResult res = projected_ascent(cone, obj, proj, starts, opt);
    compass_polish(obj, proj, res.x, res.value, 2,
                   0.05 * (1.0 + norm(cone, res.x)));
    out.value = -res.value;
    out.argmin = res.x;

    const bool pinned = norm(cone, res.x) >= rho * (1.0 - 1e-4);
    if (!pinned) return out;
    if (d >= max_doublings) {
      out.capped = true;
      return out;
    }
    rho *= 2.0;
  }
}

}  // namespace

double extend_lipschitz_monotone(const HamiltonianSpec& H,
                                 const ConeDescriptor& cone, const Point& x,
                                 const OptimizerConfig& opt) {
  require_monotone(H, "extend_lipschitz_monotone");
  if (!(H.global_lip < kInf))
    throw std::invalid_argument(
        "extend_lipschitz_monotone: H must carry a finite global Lipschitz "
        "constant (clip it first)");
  if (cone.is_orthant_family() || contains(cone, x, 1e-9))
    return H.evaluator(project(cone, x));
  ShiftedMin m =
      minimize_shifted(H.evaluator, cone, x, opt, 4.0 * (1.0 + norm(cone, x)), 4);
  return m.value;
}

double extend_growing(const HamiltonianSpec& H, const ConeDescriptor& cone,
                      const Point& x, const OptimizerConfig& opt) {
  require_monotone(H, "extend_growing");
  if (cone.is_orthant_family() || contains(cone, x, 1e-9))
    return H.evaluator(project(cone, x));
  ShiftedMin m =
      minimize_shifted(H.evaluator, cone, x, opt, 2.0 * (1.0 + norm(cone, x)), 10);
  if (m.capped)
    throw NonCoercive(
        "extend_growing: minimiser pinned to the search ball at the radius "
        "cap; H does not grow fast enough");
  return m.value;
}

HamiltonianSpec clip_and_extend(const HamiltonianSpec& H,
                                const ConeDescriptor& cone, double R,
                                const OptimizerConfig& opt,
                                ClipConstants* out_constants) {
  require_monotone(H, "clip_and_extend");
  if (!(R > 0)) throw std::invalid_argument("clip_and_extend: R must be > 0");
  if (!H.local_lip)
    throw std::invalid_argument("clip_and_extend: H needs local_lip metadata");

  const Point v = interior_point(cone);
  const double vn = norm(cone, v);

  // fit c with |x|/c <= <v,x> <= c|x| on C over sampled cone points
  Rng rng(subseed(opt.seed, "clip.fit"));
  double c = 1.0;
  for (int i = 0; i < 10000; ++i) {
    Point p = random_cone_point(cone, rng, 1.0);
    const double n = norm(cone, p);
    if (n < 1e-9) continue;
    const double a = inner_product(cone, v, p);
    if (a < 1e-12) continue;
    c = std::max(c, std::max(n / a, a / n));
  }
  c *= 1.02;  // sampled sup headroom

  const double r = 1.1 * (2.0 * c * c + 1.0) * R / (2.0 * c);
  const double L = std::max(H.local_lip(2.0 * r * c), 0.0);
  const double slope = 2.0 * L * c;
  const double H0 = H.evaluator(Point(cone.ambient_dim(), 0.0));

  if (out_constants) {
    out_constants->equiv = c;
    out_constants->r = r;
    out_constants->L = L;
    out_constants->slope = slope;
  }

  auto base = H.evaluator;
  auto tilde = [cone, base, v, r, slope, H0](const Point& y) {
    const double a = inner_product(cone, v, y);
    const double affine = H0 + slope * (a - r);
    if (a <= 2.0 * r) return std::max(base(y), affine);
    return affine;
  };

  HamiltonianSpec F;
  F.name = H.name.empty() ? "clip" : H.name + "+clip";
  F.flags = H.flags;
  F.lower_bound = H0;
  F.global_lip = std::max(L, slope * vn);
  F.local_lip = [gl = F.global_lip](double) { return gl; };

  const bool lattice = cone.is_orthant_family();
  OptimizerConfig inner = opt;
  inner.max_iter = std::max(60, opt.max_iter / 2);
  F.evaluator = [cone, tilde, lattice, inner](const Point& x) {
    if (lattice || contains(cone, x, 1e-9))
      return tilde(project(cone, x));
    ShiftedMin m = minimize_shifted(tilde, cone, x, inner,
                                    4.0 * (1.0 + norm(cone, x)), 4);
    return m.value;
  };
  return F;
}

HamiltonianSpec make_extension(const HamiltonianSpec& H,
                               const ConeDescriptor& cone,
                               const std::string& method, double radius,
                               const OptimizerConfig& opt) {
  if (method == "clip") return clip_and_extend(H, cone, radius, opt);
  if (method == "lip") {
    HamiltonianSpec F = H;
    F.name = H.name.empty() ? "lip" : H.name + "+lip";
    F.evaluator = [H, cone, opt](const Point& x) {
      return extend_lipschitz_monotone(H, cone, x, opt);
    };
    return F;
  }
  if (method == "growing") {
    HamiltonianSpec F = H;
    F.name = H.name.empty() ? "growing" : H.name + "+growing";
    F.evaluator = [H, cone, opt](const Point& x) {
      return extend_growing(H, cone, x, opt);
    };
    return F;
  }
  throw std::invalid_argument("extension method must be lip, clip or growing");
}

}  // namespace hjcone
