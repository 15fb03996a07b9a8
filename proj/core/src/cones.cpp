#include "hjcone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "hjcone/jacobi.hpp"
#include "hjcone/optimize.hpp"
#include "hjcone/sampling.hpp"

namespace hjcone {

ConeDescriptor ConeDescriptor::orthant(int dim) {
  if (dim < 1) throw std::invalid_argument("orthant: dim must be >= 1");
  ConeDescriptor c;
  c.kind_ = ConeKind::Orthant;
  c.ambient_dim_ = dim;
  return c;
}

ConeDescriptor ConeDescriptor::psd(int matrix_dim) {
  if (matrix_dim < 1) throw std::invalid_argument("psd: matrix_dim must be >= 1");
  ConeDescriptor c;
  c.kind_ = ConeKind::Psd;
  c.matrix_dim_ = matrix_dim;
  c.ambient_dim_ = packed_dim(matrix_dim);
  return c;
}

ConeDescriptor ConeDescriptor::product(std::vector<ConeDescriptor> factors,
                                       std::vector<double> weights) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  if (factors.size() != weights.size())
    throw std::invalid_argument("product: factors/weights size mismatch");
  double sum = 0;
  for (double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("product: weights must be > 0");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("product: weights must sum to 1");
  ConeDescriptor c;
  c.kind_ = ConeKind::Product;
  c.factors_ = std::move(factors);
  c.weights_ = std::move(weights);
  c.offsets_.reserve(c.factors_.size());
  int off = 0;
  for (const auto& f : c.factors_) {
    c.offsets_.push_back(off);
    off += f.ambient_dim();
  }
  c.ambient_dim_ = off;
  return c;
}

int ConeDescriptor::matrix_dim() const {
  if (kind_ != ConeKind::Psd) throw std::logic_error("matrix_dim: not a Psd cone");
  return matrix_dim_;
}

const std::vector<ConeDescriptor>& ConeDescriptor::factors() const {
  if (kind_ != ConeKind::Product) throw std::logic_error("factors: not a Product");
  return factors_;
}

const std::vector<double>& ConeDescriptor::weights() const {
  if (kind_ != ConeKind::Product) throw std::logic_error("weights: not a Product");
  return weights_;
}

int ConeDescriptor::factor_offset(int i) const {
  if (kind_ != ConeKind::Product) throw std::logic_error("factor_offset: not a Product");
  return offsets_.at(static_cast<size_t>(i));
}

bool ConeDescriptor::is_orthant_family() const {
  if (kind_ == ConeKind::Orthant) return true;
  if (kind_ != ConeKind::Product) return false;
  for (const auto& f : factors_)
    if (!f.is_orthant_family()) return false;
  return true;
}

bool ConeDescriptor::operator==(const ConeDescriptor& o) const {
  if (kind_ != o.kind_ || ambient_dim_ != o.ambient_dim_) return false;
  if (kind_ == ConeKind::Psd) return matrix_dim_ == o.matrix_dim_;
  if (kind_ == ConeKind::Product)
    return weights_ == o.weights_ && factors_ == o.factors_;
  return true;
}

std::string ConeDescriptor::describe() const {
  std::ostringstream s;
  switch (kind_) {
    case ConeKind::Orthant:
      s << "Orthant(" << ambient_dim_ << ")";
      break;
    case ConeKind::Psd:
      s << "Psd(" << matrix_dim_ << ")";
      break;
    case ConeKind::Product: {
      s << "Product[";
      for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) s << ", ";
        s << weights_[i] << "*" << factors_[i].describe();
      }
      s << "]";
      break;
    }
  }
  return s.str();
}

// ---- coordinate helpers -------------------------------------------------

static void check_dim(const ConeDescriptor& cone, const Point& x,
                      const char* who) {
  if (static_cast<int>(x.size()) != cone.ambient_dim()) {
    std::ostringstream s;
    s << who << ": point has dim " << x.size() << ", cone ambient dim is "
      << cone.ambient_dim();
    throw std::invalid_argument(s.str());
  }
}

static double ip_rec(const ConeDescriptor& cone, const double* x,
                     const double* y) {
  if (cone.kind() == ConeKind::Product) {
    double s = 0;
    const auto& fs = cone.factors();
    const auto& ws = cone.weights();
    for (size_t i = 0; i < fs.size(); ++i) {
      const int off = cone.factor_offset(static_cast<int>(i));
      s += ws[i] * ip_rec(fs[i], x + off, y + off);
    }
    return s;
  }
  double s = 0;
  for (int i = 0; i < cone.ambient_dim(); ++i) s += x[i] * y[i];
  return s;
}

double inner_product(const ConeDescriptor& cone, const Point& x,
                     const Point& y) {
  check_dim(cone, x, "inner_product");
  check_dim(cone, y, "inner_product");
  return ip_rec(cone, x.data(), y.data());
}

double norm(const ConeDescriptor& cone, const Point& x) {
  check_dim(cone, x, "norm");
  return std::sqrt(std::max(0.0, ip_rec(cone, x.data(), x.data())));
}

// ---- projections --------------------------------------------------------

static void project_rec(const ConeDescriptor& cone, const double* x,
                        double* out) {
  switch (cone.kind()) {
    case ConeKind::Orthant:
      for (int i = 0; i < cone.ambient_dim(); ++i)
        out[i] = x[i] > 0 ? x[i] : 0.0;
      return;
    case ConeKind::Psd: {
      const int d = cone.matrix_dim();
      Point packed(x, x + cone.ambient_dim());
      std::vector<double> full = unpack_symmetric(d, packed);
      std::vector<double> vals, vecs;
      if (!jacobi_eigensymm(d, full, vals, vecs))
        throw EigenFailure("psd projection: Jacobi sweeps exhausted");
      // reconstruct V max(Lambda,0) V^T
      std::vector<double> rec(static_cast<size_t>(d) * d, 0.0);
      for (int k = 0; k < d; ++k) {
        const double lam = vals[k] > 0 ? vals[k] : 0.0;
        if (lam == 0) continue;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            rec[i * d + j] += lam * vecs[i * d + k] * vecs[j * d + k];
      }
      Point repacked = pack_symmetric(d, rec);
      std::copy(repacked.begin(), repacked.end(), out);
      return;
    }
    case ConeKind::Product: {
      const auto& fs = cone.factors();
      for (size_t i = 0; i < fs.size(); ++i) {
        const int off = cone.factor_offset(static_cast<int>(i));
        project_rec(fs[i], x + off, out + off);
      }
      return;
    }
  }
}

Point project(const ConeDescriptor& cone, const Point& x) {
  check_dim(cone, x, "project");
  Point out(x.size());
  project_rec(cone, x.data(), out.data());
  return out;
}

Point project_dual(const ConeDescriptor& cone, const Point& x) {
  check_dim(cone, x, "project_dual");
  Point neg(x.size());
  for (size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  Point p = project(cone, neg);
  for (size_t i = 0; i < x.size(); ++i) p[i] += x[i];
  return p;
}

bool contains(const ConeDescriptor& cone, const Point& x, double tol) {
  Point p = project(cone, x);
  for (size_t i = 0; i < x.size(); ++i) p[i] -= x[i];
  return norm(cone, p) <= tol;
}

// ---- boundary distance --------------------------------------------------

static double bdist_rec(const ConeDescriptor& cone, const double* x) {
  switch (cone.kind()) {
    case ConeKind::Orthant: {
      double m = std::numeric_limits<double>::infinity();
      for (int i = 0; i < cone.ambient_dim(); ++i) m = std::min(m, x[i]);
      return m;
    }
    case ConeKind::Psd: {
      const int d = cone.matrix_dim();
      Point packed(x, x + cone.ambient_dim());
      std::vector<double> full = unpack_symmetric(d, packed);
      std::vector<double> vals, vecs;
      if (!jacobi_eigensymm(d, full, vals, vecs))
        throw EigenFailure("boundary_distance: Jacobi sweeps exhausted");
      return *std::min_element(vals.begin(), vals.end());
    }
    case ConeKind::Product: {
      double m = std::numeric_limits<double>::infinity();
      const auto& fs = cone.factors();
      const auto& ws = cone.weights();
      for (size_t i = 0; i < fs.size(); ++i) {
        const int off = cone.factor_offset(static_cast<int>(i));
        m = std::min(m, std::sqrt(ws[i]) * bdist_rec(fs[i], x + off));
      }
      return m;
    }
  }
  return 0;
}

double boundary_distance(const ConeDescriptor& cone, const Point& x,
                         double tol) {
  check_dim(cone, x, "boundary_distance");
  if (!contains(cone, x, tol))
    throw std::domain_error("boundary_distance: point is outside the cone");
  return std::max(0.0, bdist_rec(cone, x.data()));
}

double boundary_distance_multistart(const ConeDescriptor& cone, const Point& x,
                                    int starts, std::uint64_t seed) {
  check_dim(cone, x, "boundary_distance_multistart");
  const int dim = cone.ambient_dim();
  Rng rng(subseed(seed, "boundary_distance"));

  auto objective = [&](const Point& y) {  // maximize -<y,x>
    return -ip_rec(cone, y.data(), x.data());
  };
  Point fallback = interior_point(cone);
  {
    const double n = norm(cone, fallback);
    for (double& c : fallback) c /= n;
  }
  auto proj = [&](Point& y) {  // project to C*, renormalise to the sphere
    y = project_dual(cone, y);
    const double n = norm(cone, y);
    if (n < 1e-12) {
      y = fallback;
    } else {
      for (double& c : y) c /= n;
    }
  };

  std::vector<Point> start_pts;
  start_pts.push_back(fallback);
  for (int i = 0; i < dim; ++i) {  // axis directions
    Point e(dim, 0.0);
    e[i] = 1.0;
    start_pts.push_back(e);
  }
  while (static_cast<int>(start_pts.size()) < starts + 1 + dim)
    start_pts.push_back(random_unit_dual(cone, rng));

  OptimizerConfig cfg;
  cfg.max_iter = 200;
  cfg.seed = seed;
  OptResult res = projected_ascent(cone, objective, proj, start_pts, cfg);
  return -res.value;
}

// ---- interior point, norms ----------------------------------------------

static void interior_rec(const ConeDescriptor& cone, double* out) {
  switch (cone.kind()) {
    case ConeKind::Orthant:
      for (int i = 0; i < cone.ambient_dim(); ++i) out[i] = 1.0;
      return;
    case ConeKind::Psd: {
      const int d = cone.matrix_dim();
      int k = 0;
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) out[k++] = (i == j) ? 1.0 : 0.0;
      return;
    }
    case ConeKind::Product: {
      const auto& fs = cone.factors();
      for (size_t i = 0; i < fs.size(); ++i)
        interior_rec(fs[i], out + cone.factor_offset(static_cast<int>(i)));
      return;
    }
  }
}

Point interior_point(const ConeDescriptor& cone) {
  Point v(cone.ambient_dim());
  interior_rec(cone, v.data());
  return v;
}

double norm_p(const ConeDescriptor& cone, const Point& x, double p) {
  check_dim(cone, x, "norm_p");
  const bool is_inf = std::isinf(p) && p > 0;
  if (!is_inf && !(p >= 1.0))
    throw std::invalid_argument("norm_p: p must be >= 1 or infinity");
  if (cone.kind() != ConeKind::Product) return norm(cone, x);

  const auto& fs = cone.factors();
  const auto& ws = cone.weights();
  double acc = 0.0;
  for (size_t i = 0; i < fs.size(); ++i) {
    const int off = cone.factor_offset(static_cast<int>(i));
    Point sub(x.begin() + off, x.begin() + off + fs[i].ambient_dim());
    const double ni = norm(fs[i], sub);
    if (is_inf)
      acc = std::max(acc, ni);
    else
      acc += ws[i] * std::pow(ni, p);
  }
  return is_inf ? acc : std::pow(acc, 1.0 / p);
}

double dual_exponent(double p) {
  if (std::isinf(p) && p > 0) return 1.0;
  if (!(p >= 1.0))
    throw std::invalid_argument("dual_exponent: p must be >= 1 or infinity");
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

// ---- packed symmetric storage -------------------------------------------

int packed_dim(int matrix_dim) { return matrix_dim * (matrix_dim + 1) / 2; }

Point pack_symmetric(int d, const std::vector<double>& full) {
  if (static_cast<int>(full.size()) != d * d)
    throw std::invalid_argument("pack_symmetric: bad matrix size");
  static const double kSqrt2 = std::sqrt(2.0);
  Point out(packed_dim(d));
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      out[k++] = (i == j) ? full[i * d + j] : kSqrt2 * 0.5 *
                                                  (full[i * d + j] + full[j * d + i]);
  return out;
}

std::vector<double> unpack_symmetric(int d, const Point& packed) {
  if (static_cast<int>(packed.size()) != packed_dim(d))
    throw std::invalid_argument("unpack_symmetric: bad packed size");
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<double> full(static_cast<size_t>(d) * d);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double v = packed[k++];
      if (i == j) {
        full[i * d + j] = v;
      } else {
        full[i * d + j] = full[j * d + i] = v * kInvSqrt2;
      }
    }
  return full;
}

}  // namespace hjcone
