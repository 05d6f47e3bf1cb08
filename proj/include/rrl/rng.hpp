#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rrl {

// splitmix64 round; used to derive independent child seeds from a base seed
// plus a salt, so evaluation cells and training sub-streams stay decoupled
// regardless of execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random stream. Distributions are implemented by hand on top of
// mt19937_64 so that sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n); n must be >= 1
  std::uint64_t uniform_int(std::uint64_t n) { return engine_() % n; }

  // standard normal via Box-Muller (cosine branch only)
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::vector<double> normal_vec(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  // uniform direction on the unit sphere in R^dim
  std::vector<double> unit_vector(std::size_t dim) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : v) {
        x = normal();
        norm += x * x;
      }
    } while (norm < 1e-24);
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rrl
