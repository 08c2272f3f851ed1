#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace eelink {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent random stream per (seed, trial). Trials can be evaluated in
// any order without shared generator state. Gaussian draws use Box-Muller on
// raw 64-bit output, so sequences do not depend on the standard library's
// distribution implementations.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : engine_(splitmix64(splitmix64(seed) ^ (trial * 0xd1342543de82ef95ULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0, 1]; never zero, safe under log().
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  // Circularly-symmetric complex Gaussian with unit variance.
  std::complex<double> complex_gaussian() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double re = gaussian();
    const double im = gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eelink
