#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hjcone {

/// Flat coordinate vector in the ambient Hilbert space of a cone.
/// Symmetric matrices are stored packed (see pack_symmetric); product cones
/// concatenate the coordinates of their factors.
using Point = std::vector<double>;

enum class ConeKind { Orthant, Psd, Product };

/// Description of a closed convex cone: nonnegative orthant, positive
/// semidefinite matrices, or a finite weighted product of cones.
///
/// The ambient inner product is the Euclidean dot for orthants, the Frobenius
/// inner product for Psd (the packed storage is scaled so the flat dot product
/// already equals it), and <x,y> = sum_i a_i <x_i,y_i>_i for products with
/// weights a_i > 0, sum_i a_i = 1.
class ConeDescriptor {
 public:
  static ConeDescriptor orthant(int dim);
  static ConeDescriptor psd(int matrix_dim);
  static ConeDescriptor product(std::vector<ConeDescriptor> factors,
                                std::vector<double> weights);

  ConeKind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }

  /// Psd only: side length D of the symmetric matrices.
  int matrix_dim() const;

  /// Product only.
  const std::vector<ConeDescriptor>& factors() const;
  const std::vector<double>& weights() const;
  /// Offset of factor i inside the flat coordinate vector.
  int factor_offset(int i) const;

  /// True for orthants and products of such (cones whose order is a lattice).
  bool is_orthant_family() const;

  bool operator==(const ConeDescriptor& o) const;
  bool operator!=(const ConeDescriptor& o) const { return !(*this == o); }

  std::string describe() const;

 private:
  ConeDescriptor() = default;
  ConeKind kind_ = ConeKind::Orthant;
  int ambient_dim_ = 0;
  int matrix_dim_ = 0;  // Psd
  std::vector<ConeDescriptor> factors_;
  std::vector<double> weights_;
  std::vector<int> offsets_;
};

double inner_product(const ConeDescriptor& cone, const Point& x, const Point& y);
double norm(const ConeDescriptor& cone, const Point& x);

/// Membership test: dist(x, C) <= tol in the cone's norm.
bool contains(const ConeDescriptor& cone, const Point& x, double tol = 1e-9);

/// Metric projection onto C (w.r.t. the cone's inner product).
Point project(const ConeDescriptor& cone, const Point& x);

/// Metric projection onto the dual cone C* = {y : <y,x> >= 0 for all x in C}.
/// Computed as P_{C*}(x) = x + P_C(-x) (Moreau).
Point project_dual(const ConeDescriptor& cone, const Point& x);

/// d(x) = inf{ <y,x> : y in C*, |y| = 1 } = dist(x, boundary of C) for x in C.
/// Closed forms: min_i x_i on orthants, lambda_min on Psd,
/// min_i sqrt(a_i) d_i(x_i) on products. Requires x in C (within tol).
double boundary_distance(const ConeDescriptor& cone, const Point& x,
                         double tol = 1e-9);

/// Generic route for d(x): multistart projected-gradient minimisation of
/// <y,x> over unit vectors y in C*. Used as a cross-check of the closed forms.
double boundary_distance_multistart(const ConeDescriptor& cone, const Point& x,
                                    int starts = 32, std::uint64_t seed = 0);

/// A canonical point of int(C) ∩ int(C*): all-ones for orthants, the identity
/// for Psd, the concatenation for products.
Point interior_point(const ConeDescriptor& cone);

/// l^p combination across top-level product factors:
/// ||x||_p = (sum_i a_i |x_i|_i^p)^{1/p}, ||x||_inf = max_i |x_i|_i,
/// where |.|_i is the factor's Hilbert norm. Non-product cones behave as a
/// single factor, so ||x||_p = |x| for every p. Requires p >= 1 or p = inf.
double norm_p(const ConeDescriptor& cone, const Point& x, double p);

/// Conjugate exponent: 1 <-> inf, otherwise p/(p-1).
double dual_exponent(double p);

/// Packed symmetric storage. A D x D symmetric matrix is stored as its upper
/// triangle, row by row, with off-diagonal entries scaled by sqrt(2) so that
/// the flat dot product of two packed vectors equals the Frobenius inner
/// product of the matrices.
int packed_dim(int matrix_dim);
Point pack_symmetric(int matrix_dim, const std::vector<double>& full_row_major);
std::vector<double> unpack_symmetric(int matrix_dim, const Point& packed);

}  // namespace hjcone
