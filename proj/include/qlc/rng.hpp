#pragma once
#include <cstdint>
#include <random>

#include "qlc/mat3.hpp"

namespace qlc {

// Deterministic across platforms: mt19937_64 is bit-exact by the standard, but the
// std:: distributions are not, so the mappings below are done by hand.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t raw() { return eng_(); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, no cached spare (keeps state a pure function of draw count)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Vec3 unit_vector() {
    // marsaglia-free: normalize a gaussian triple (rejection-free, deterministic draws)
    Vec3 g{{normal(), normal(), normal()}};
    double n = norm(g);
    while (n < 1e-12) {
      g = Vec3{{normal(), normal(), normal()}};
      n = norm(g);
    }
    return {{g[0] / n, g[1] / n, g[2] / n}};
  }

  // random symmetric traceless matrix, entries O(scale)
  Mat3 s0_tensor(double scale = 1.0) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = scale * normal();
    return symmetrize_traceless(m);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace qlc
