#include "hjcone/sampling.hpp"

#include <cmath>

#include "hjcone/optimize.hpp"

namespace hjcone {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t subseed(std::uint64_t seed, std::string_view tag) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return seed ^ h;
}

std::uint64_t subseed(std::uint64_t seed, std::string_view tag,
                      std::uint64_t index) {
  std::uint64_t h = subseed(seed, tag);
  // splitmix64 step to decorrelate consecutive indices
  std::uint64_t z = h + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Point random_gaussian(Rng& rng, int dim) {
  Point x(dim);
  for (double& c : x) c = rng.gaussian();
  return x;
}

Point random_cone_point(const ConeDescriptor& cone, Rng& rng, double scale) {
  Point g = random_gaussian(rng, cone.ambient_dim());
  for (double& c : g) c *= scale;
  return project(cone, g);
}

Point random_interior_point(const ConeDescriptor& cone, Rng& rng,
                            double scale) {
  Point p = random_cone_point(cone, rng, scale);
  Point v = interior_point(cone);
  const double blend = 0.05 + 0.2 * rng.uniform();
  for (size_t i = 0; i < p.size(); ++i)
    p[i] = (1.0 - blend) * p[i] + blend * scale * v[i];
  return p;
}

Point random_unit_dual(const ConeDescriptor& cone, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Point y = project_dual(cone, random_gaussian(rng, cone.ambient_dim()));
    const double n = norm(cone, y);
    if (n > 1e-9) {
      for (double& c : y) c /= n;
      return y;
    }
  }
  Point v = interior_point(cone);  // dual of our cones contains v
  const double n = norm(cone, v);
  for (double& c : v) c /= n;
  return v;
}

std::vector<Point> multistart_points(const ConeDescriptor& cone, double radius,
                                     int random_count, std::uint64_t seed,
                                     const Point* extra) {
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(random_count) + 8);
  if (extra) pts.push_back(*extra);

  pts.emplace_back(cone.ambient_dim(), 0.0);  // apex

  Point v = interior_point(cone);
  const double vn = norm(cone, v);
  for (double s : {0.25, 0.5, 0.75, 0.999}) {
    Point p(v);
    for (double& c : p) c *= s * radius / vn;
    pts.push_back(std::move(p));
  }

  Rng rng(subseed(seed, "multistart"));
  for (int i = 0; i < random_count; ++i) {
    Point p = random_cone_point(cone, rng, radius * 0.5);
    const double n = norm(cone, p);
    if (n > radius) {
      for (double& c : p) c *= radius / n;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace hjcone
