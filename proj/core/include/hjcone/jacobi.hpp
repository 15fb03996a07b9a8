#pragma once

#include <stdexcept>
#include <vector>

namespace hjcone {

/// Thrown when the eigensolver fails to converge within its sweep budget.
struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cyclic Jacobi eigendecomposition of a small dense symmetric matrix.
/// a is n x n row-major and is destroyed. On success eigvals holds the
/// eigenvalues and eigvecs the matrix V (row-major, columns are eigenvectors,
/// A = V diag(eigvals) V^T). Converged when the off-diagonal Frobenius mass
/// drops below tol * max(1, ||A||_F); returns false if max_sweeps is hit first.
bool jacobi_eigensymm(int n, std::vector<double>& a,
                      std::vector<double>& eigvals,
                      std::vector<double>& eigvecs,
                      int max_sweeps = 100, double tol = 1e-12);

}  // namespace hjcone
