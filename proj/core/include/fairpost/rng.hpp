#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fairpost {

/// Seeded PRNG with explicitly-coded distributions.  std::mt19937_64 output
/// is pinned by the standard, but the standard library's distributions are
/// not, so uniform/normal draws are derived here to keep every sampled
/// artifact bit-reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform draw in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal pair via Box-Muller.
  void normal_pair(double& z0, double& z1) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double z0, z1;
    normal_pair(z0, z1);
    spare_ = z1;
    have_spare_ = true;
    return z0;
  }

  /// Integer in [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fairpost
