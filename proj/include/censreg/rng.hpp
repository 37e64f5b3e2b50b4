#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace censreg {

/// SplitMix64 finalizer; used to derive well-separated seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replication `rep` of grid cell `cell`: seed XOR hash(cell, rep).
/// Depends only on its arguments, so results do not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t cell,
                                    std::uint64_t rep) noexcept {
  return seed ^ splitmix64(splitmix64(cell) ^ (rep * 0xd1b54a32d192ed03ULL));
}

/// std::mt19937_64 (output fully specified by the standard) with uniforms
/// taken from the top 53 bits and normals from the Marsaglia polar method.
/// No std:: distribution objects are involved, so streams are identical on
/// every conforming library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace censreg
