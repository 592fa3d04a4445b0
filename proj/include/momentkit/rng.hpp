#pragma once

#include "momentkit/core.hpp"

#include <cstdint>
#include <string_view>

namespace momentkit {

// Counter-based generator (splitmix64 finalizer over seed + counter): output
// k is a pure function of (seed, k). Gaussians come from hand-rolled
// Box-Muller so reports are byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  // Independent stream for a named check; insensitive to call order elsewhere.
  Rng(std::uint64_t seed, std::string_view label) : seed_(mix(seed ^ fnv1a(label))) {}

  std::uint64_t next_u64() { return mix(seed_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // uniform on (0,1]; never zero so log() is safe
  double uniform01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  RVec gaussian_rvec(Eigen::Index n) {
    RVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  CVec gaussian_cvec(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal();
      const double im = normal();
      v(i) = Complex(re, im);
    }
    return v;
  }

  // normalized Gaussian vector: uniform on the unit sphere of C^n
  CVec unit_state(Eigen::Index n) {
    CVec v = gaussian_cvec(n);
    return v / v.norm();
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace momentkit
