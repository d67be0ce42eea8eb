#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "karlin/rng.hpp"

namespace karlin {

enum class FreqFamily { PurePowerLaw, LogPerturbed };

struct Normalizations {
  std::uint64_t d_n = 0;  // nu(n), exact count
  double b_n = 0.0;       // d_n^{1/alpha}
  double sigma_n = 0.0;   // 2^{beta-1} (Gamma(1-beta) d_n)^{1/2}
};

// Ranked frequencies p_k = k^{-1/beta}/Z (PurePowerLaw) or
// p_k = k^{-1/beta}(1+log k)^{-1}/Z (LogPerturbed robustness family),
// beta in (0,1). The counting function nu(x) = #{k >= 1 : p_k >= 1/x} is
// evaluated exactly against the same double-precision p_k the sampler uses.
class FrequencyModel {
 public:
  static FrequencyModel pure_power(double beta);
  static FrequencyModel log_perturbed(double beta);

  double beta() const { return beta_; }
  double exponent() const { return q_; }  // 1/beta
  FreqFamily family() const { return family_; }
  double normalizer() const { return z_; }

  double p(std::uint64_t k) const;
  // sum_{j > k} p_j with midpoint-rule tail, absolute error below 1e-12 relative scale
  double tail_sum(std::uint64_t k) const;
  // sum_{j > k} p_j^pow_j for pow_j in 1..6; moment tails for series expansions
  double tail_power_sum(int pow_j, std::uint64_t k) const;

  std::uint64_t nu(double x) const;
  Normalizations normalizations(std::uint64_t n, double alpha) const;

 private:
  FrequencyModel(FreqFamily family, double beta);
  double shape(double x) const;  // unnormalized k^{-q} or k^{-q}/(1+log k)

  FreqFamily family_;
  double beta_;
  double q_;
  double z_;
};

// Label sampler. sample() composes an exact alias table over k < 1024 with
// rejection-inversion on the tail; sample_rejection() is the pure
// rejection-inversion method over the full support (same law, slower).
class ZipfSampler {
 public:
  explicit ZipfSampler(const FrequencyModel& model);

  const FrequencyModel& model() const { return *model_; }
  std::uint64_t sample(Rng& rng) const;
  std::uint64_t sample_rejection(Rng& rng) const;

 private:
  std::uint64_t sample_power_tail(Rng& rng, double u_low, std::uint64_t k_min) const;

  const FrequencyModel* model_;
  double q_;
  double u_infinity_;   // H(inf) for the power envelope
  double u_low_full_;   // H-range lower bound, full support
  double u_low_tail_;   // H-range lower bound, k >= kHeadSize
  double accept_shift_full_;
  double accept_shift_tail_;
  // alias table over {1..kHeadSize-1, escape-to-tail}
  std::vector<double> alias_prob_;
  std::vector<std::uint32_t> alias_idx_;
  double head_mass_;
};

}  // namespace karlin
