#include "hjcone/fd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjcone {

namespace {

/// Per-coordinate weights of the ambient inner product: 1 on orthant and Psd
/// coordinates (packed Psd storage already makes the flat dot the Frobenius
/// product), the cumulative product weight on product factors. The Riesz
/// gradient in flat coordinates is the partial derivative divided by this.
void collect_axis_weights(const ConeDescriptor& c, double scale,
                          std::vector<double>& out) {
  switch (c.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Psd:
      out.insert(out.end(), static_cast<size_t>(c.ambient_dim()), scale);
      return;
    case ConeKind::Product:
      for (size_t i = 0; i < c.factors().size(); ++i)
        collect_axis_weights(c.factors()[i], scale * c.weights()[i], out);
      return;
  }
  throw std::logic_error("collect_axis_weights: unreachable");
}

std::vector<double> axis_weights(const ConeDescriptor& c) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(c.ambient_dim()));
  collect_axis_weights(c, 1.0, out);
  return out;
}

}  // namespace

int GridSpec::nodes_per_axis() const {
  return static_cast<int>(std::lround(extent / h)) + 1;
}

double FdResult::at(int i, int j) const {
  const int n = grid.nodes_per_axis();
  return field[static_cast<size_t>(i) * static_cast<size_t>(n) +
               static_cast<size_t>(j)];
}

FdResult solve_fd(const HamiltonianSpec& H_ext, const InitialConditionSpec& psi,
                  const ConeDescriptor& cone, const GridSpec& grid) {
  if (grid.dim != 1 && grid.dim != 2)
    throw std::invalid_argument("solve_fd: only dimensions 1 and 2 are supported");
  if (!cone.is_orthant_family())
    throw std::invalid_argument("solve_fd: only orthant-family cones are supported");
  if (cone.ambient_dim() != grid.dim)
    throw std::invalid_argument("solve_fd: cone and grid dimensions differ");
  if (!(grid.h > 0.0) || !(grid.extent > 0.0))
    throw std::invalid_argument("solve_fd: extent and h must be positive");
  if (!(grid.cfl > 0.0) || !(grid.cfl < 1.0))
    throw std::invalid_argument("solve_fd: cfl must lie in (0,1)");
  if (!(grid.T >= 0.0)) throw std::invalid_argument("solve_fd: T must be >= 0");
  if (!H_ext.evaluator)
    throw std::invalid_argument("solve_fd: missing Hamiltonian evaluator");
  if (!psi.evaluator)
    throw std::invalid_argument("solve_fd: missing initial-condition evaluator");

  const double L = H_ext.global_lip;
  if (!std::isfinite(L) || L < 0.0)
    throw std::invalid_argument(
        "solve_fd: Hamiltonian must carry a finite global Lipschitz constant "
        "(apply an extension first)");

  const int n = grid.nodes_per_axis();
  if (n < 3)
    throw std::invalid_argument("solve_fd: need at least 3 nodes per axis");
  if (std::fabs((n - 1) * grid.h - grid.extent) > 1e-9 * grid.extent)
    throw std::invalid_argument("solve_fd: extent must be a multiple of h");

  const std::vector<double> aw = axis_weights(cone);

  FdResult out;
  out.grid = grid;
  out.axis_alpha.resize(static_cast<size_t>(grid.dim));
  double alpha_sum = 0.0;
  for (int i = 0; i < grid.dim; ++i) {
    out.axis_alpha[static_cast<size_t>(i)] = L / std::sqrt(aw[static_cast<size_t>(i)]);
    alpha_sum += out.axis_alpha[static_cast<size_t>(i)];
  }
  const double dt0 =
      alpha_sum > 0.0 ? grid.cfl * grid.h / alpha_sum : std::max(grid.T, 1e-12);
  out.dt = dt0;

  const int nj = (grid.dim == 2) ? n : 1;
  const size_t total = static_cast<size_t>(n) * static_cast<size_t>(nj);
  std::vector<double> f(total), fnew(total);

  Point xp(static_cast<size_t>(grid.dim));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < nj; ++j) {
      xp[0] = i * grid.h;
      if (grid.dim == 2) xp[1] = j * grid.h;
      f[static_cast<size_t>(i) * nj + j] = psi.evaluator(xp);
    }
  }

  const int steps =
      grid.T > 0.0 ? static_cast<int>(std::ceil(grid.T / dt0 - 1e-12)) : 0;
  out.steps = steps;

  auto idx = [&](int a, int b) {
    return static_cast<size_t>(a) * nj + static_cast<size_t>(b);
  };
  // One ghost layer by linear extrapolation; only one axis is ever out of
  // range at a time (the scheme never touches corners diagonally).
  auto val = [&](const std::vector<double>& g, int i, int j) -> double {
    if (i < 0) return 2.0 * g[idx(0, j)] - g[idx(1, j)];
    if (i >= n) return 2.0 * g[idx(n - 1, j)] - g[idx(n - 2, j)];
    if (grid.dim == 2) {
      if (j < 0) return 2.0 * g[idx(i, 0)] - g[idx(i, 1)];
      if (j >= n) return 2.0 * g[idx(i, n - 1)] - g[idx(i, n - 2)];
    }
    return g[idx(i, j)];
  };

  Point gavg(static_cast<size_t>(grid.dim));
  double tacc = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double dt = (s == steps - 1) ? grid.T - tacc : dt0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < nj; ++j) {
        const double fc = f[idx(i, j)];
        double diss = 0.0;

        const double fp0 = val(f, i + 1, j);
        const double fm0 = val(f, i - 1, j);
        gavg[0] = (fp0 - fm0) / (2.0 * grid.h) / aw[0];
        diss += 0.5 * out.axis_alpha[0] * (fp0 - 2.0 * fc + fm0) / grid.h;

        if (grid.dim == 2) {
          const double fp1 = val(f, i, j + 1);
          const double fm1 = val(f, i, j - 1);
          gavg[1] = (fp1 - fm1) / (2.0 * grid.h) / aw[1];
          diss += 0.5 * out.axis_alpha[1] * (fp1 - 2.0 * fc + fm1) / grid.h;
        }

        fnew[idx(i, j)] = fc + dt * (H_ext.evaluator(gavg) + diss);
        if (!std::isfinite(fnew[idx(i, j)]))
          throw std::runtime_error(
              "solve_fd: field turned non-finite at step " + std::to_string(s) +
              ", node (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    f.swap(fnew);
    tacc += dt;
  }

  out.field = std::move(f);
  return out;
}

ResidualReport residual_check(
    const std::function<double(double, const Point&)>& f,
    const HamiltonianSpec& H, const ConeDescriptor& cone,
    const std::vector<std::pair<double, Point>>& points, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("residual_check: h must be positive");
  if (!H.evaluator)
    throw std::invalid_argument("residual_check: missing Hamiltonian evaluator");

  const int dim = cone.ambient_dim();
  const std::vector<double> aw = axis_weights(cone);

  auto time_partial = [&](double t, const Point& x, double step) {
    if (t >= step) return (f(t + step, x) - f(t - step, x)) / (2.0 * step);
    return (f(t + step, x) - f(t, x)) / step;
  };
  auto space_gradient = [&](double t, const Point& x, double step) {
    Point g(static_cast<size_t>(dim));
    Point probe = x;
    for (int i = 0; i < dim; ++i) {
      probe[i] = x[i] + step;
      const double fp = f(t, probe);
      probe[i] = x[i] - step;
      const double fm = f(t, probe);
      probe[i] = x[i];
      g[i] = (fp - fm) / (2.0 * step) / aw[static_cast<size_t>(i)];
    }
    return g;
  };

  ResidualReport rep;
  for (const auto& [t, x] : points) {
    if (static_cast<int>(x.size()) != dim)
      throw std::invalid_argument("residual_check: point has wrong dimension");

    const double dt_h = time_partial(t, x, h);
    const double dt_h2 = time_partial(t, x, 0.5 * h);
    const Point g_h = space_gradient(t, x, h);
    const Point g_h2 = space_gradient(t, x, 0.5 * h);

    double disagreement = std::fabs(dt_h - dt_h2);
    double dd = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double d = g_h[i] - g_h2[i];
      dd += d * d;
    }
    disagreement = std::max(disagreement, std::sqrt(dd));

    ResidualSample s;
    s.t = t;
    s.x = x;
    s.residual = dt_h2 - H.evaluator(g_h2);
    s.smooth_stable = disagreement < 10.0 * h;
    if (s.smooth_stable) {
      ++rep.reported;
      rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(s.residual));
    } else {
      ++rep.filtered;
    }
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace hjcone
