#pragma once

#include <cstdint>
#include <random>

#include "pdhp/types.hpp"

namespace pdhp {

// splitmix64 finalizer, used to derive independent substreams from
// (seed, tag) and (seed, counter) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ tag);
}

// Fixed stream tags so every stage of the pipeline draws from its own
// substream of the experiment seed.
namespace seed_tag {
inline constexpr std::uint64_t sysid_data = 0x11d5e7a1u;
inline constexpr std::uint64_t sysid_holdout = 0x11d5e7a2u;
inline constexpr std::uint64_t plant_noise = 0x9a0b5u;
inline constexpr std::uint64_t train_states = 0x7a1e5u;
inline constexpr std::uint64_t action_init = 0xac710u;
inline constexpr std::uint64_t critic_init = 0xc2171cu;
inline constexpr std::uint64_t control_sample = 0x5a3e1u;
}  // namespace seed_tag

// Deterministic generator. Normal sampling is pinned to Box-Muller on
// mt19937_64 output so sequences do not depend on the standard library's
// unspecified std::normal_distribution algorithm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector normal_vector(int n) {
    Vector z(n);
    for (int i = 0; i < n; ++i) z[i] = normal();
    return z;
  }

  Vector uniform_vector(const Vector& lo, const Vector& hi) {
    Vector x(lo.size());
    for (int i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
    return x;
  }

  // Sample N(mean, cov) given a lower Cholesky factor of the covariance.
  Vector gaussian(const Vector& mean, const Matrix& chol_lower) {
    return mean + chol_lower * normal_vector(static_cast<int>(mean.size()));
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pdhp
