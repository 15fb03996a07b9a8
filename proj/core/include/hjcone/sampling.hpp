#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hjcone/cones.hpp"

namespace hjcone {

/// Deterministic RNG wrapper. mt19937_64 is fully specified by the standard
/// and the uniform/gaussian draws below avoid std::*_distribution, whose
/// output is implementation-defined, so streams are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0,1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  /// Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double gaussian();
  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Stable FNV-1a based sub-seed: seed xor hash(tag). Used to give every check
/// and sample point its own named stream.
std::uint64_t subseed(std::uint64_t seed, std::string_view tag);
std::uint64_t subseed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

Point random_gaussian(Rng& rng, int dim);

/// P_C of a centered gaussian, scaled. Lands on the boundary with positive
/// probability, which is what the geometry checks want.
Point random_cone_point(const ConeDescriptor& cone, Rng& rng, double scale);

/// Strictly interior sample: projected gaussian blended with the canonical
/// interior point.
Point random_interior_point(const ConeDescriptor& cone, Rng& rng, double scale);

/// Unit vector of C* (projected gaussian, renormalised; retries until the
/// projection is nonzero).
Point random_unit_dual(const ConeDescriptor& cone, Rng& rng);

}  // namespace hjcone
