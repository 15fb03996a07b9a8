#include "hjcone/jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace hjcone {

static double off_diag_norm(int n, const std::vector<double>& a) {
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

bool jacobi_eigensymm(int n, std::vector<double>& a,
                      std::vector<double>& eigvals,
                      std::vector<double>& eigvecs, int max_sweeps,
                      double tol) {
  eigvecs.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eigvecs[i * n + i] = 1.0;
  eigvals.assign(n, 0.0);

  double fro = 0;
  for (double v : a) fro += v * v;
  fro = std::sqrt(fro);
  const double thresh = tol * std::max(1.0, fro);

  bool converged = off_diag_norm(n, a) <= thresh;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) /
            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {  // A <- A J
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {  // A <- J^T A
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {  // V <- V J
          const double vkp = eigvecs[k * n + p], vkq = eigvecs[k * n + q];
          eigvecs[k * n + p] = c * vkp - s * vkq;
          eigvecs[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diag_norm(n, a) <= thresh;
  }
  for (int i = 0; i < n; ++i) eigvals[i] = a[i * n + i];
  return converged;
}

}  // namespace hjcone
