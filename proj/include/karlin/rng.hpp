#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace karlin {

// splitmix64 finalizer; bijective avalanche mix
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based stream key: replicates and roles get decorrelated streams
// regardless of scheduling order.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t replicate,
                                   std::uint64_t role) {
  return mix64(mix64(master_seed ^ (role * 0x243f6a8885a308d3ull)) + replicate);
}

// Stateless value addressed by (key, counter); used for per-label marks so the
// draw does not depend on label visit order.
inline std::uint64_t keyed_u64(std::uint64_t key, std::uint64_t counter) {
  return mix64(key ^ mix64(counter ^ 0x452821e638d01377ull));
}

inline double u64_to_unit(std::uint64_t u) {
  // (0,1), exactly representable, never 0 or 1
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  std::uint64_t u64() { return gen_(); }
  double unit() { return u64_to_unit(u64()); }            // (0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double exponential() { return -std::log(unit()); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double r = std::sqrt(-2.0 * std::log(unit()));
    double t = 6.283185307179586477 * unit();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // Exact Poisson sampler: product method below 10, PTRS transformed
  // rejection above (exact log-pmf acceptance test).
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
      double l = std::exp(-mean);
      std::uint64_t k = 0;
      double prod = unit();
      while (prod > l) {
        ++k;
        prod *= unit();
      }
      return k;
    }
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double v_r = 0.9277 - 3.6224 / (b - 2.0);
    double log_mean = std::log(mean);
    for (;;) {
      double u = unit() - 0.5;
      double v = unit();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          kf * log_mean - mean - std::lgamma(kf + 1.0))
        return static_cast<std::uint64_t>(kf);
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace karlin
