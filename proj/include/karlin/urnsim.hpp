#pragma once

#include <cstdint>
#include <vector>

#include "karlin/freq.hpp"
#include "karlin/heavytail.hpp"
#include "karlin/rng.hpp"

namespace karlin {

// Occupancy-scheme driver. Checkpoint j holds after floor(n * times[j]) label
// draws; in poissonized mode the window between consecutive checkpoints gets an
// independent Poisson(n * width) number of draws instead. Grid size is capped
// at 20 because results carry all 2^d parity-pattern counts.

struct SimConfig {
  std::uint64_t n = 0;
  std::vector<double> times{1.0};
  bool poissonized = false;
  std::uint64_t k_cut = 0;  // head/tail label split for marked sums; 0 = nu(n)
};

struct SimResult {
  std::vector<std::uint64_t> odd;             // labels with odd count, per checkpoint
  std::vector<std::uint64_t> occupied;        // labels seen at least once, per checkpoint
  std::vector<std::uint64_t> pattern_counts;  // 2^d entries; entry 0 = seen but all even
  std::uint64_t distinct = 0;
  std::uint64_t max_label = 0;
  std::uint64_t throws = 0;
  // marked sums over labels, filled when an EpsilonLaw is supplied: u sums
  // marks over odd-count labels, z over occupied labels, and u splits into
  // labels <= k_cut (head) and the rest (tail)
  std::vector<double> u, z, u_head, u_tail;
  std::uint64_t k_cut = 0;
};

// One replicate. Marks are addressed by (mark_key, label) so the mark of a
// label does not depend on the visiting order or on other labels.
SimResult simulate(const ZipfSampler& sampler, const SimConfig& cfg, Rng& rng,
                   const EpsilonLaw* marks = nullptr, std::uint64_t mark_key = 0);

// P(count of a p_k-frequency label is odd after m draws)
double odd_prob(double p_k, std::uint64_t m);

// E[#odd-count labels after m draws]: direct head sum plus a factorial-moment
// tail over labels where m * p_k is small
double expected_odd(const FrequencyModel& model, std::uint64_t m);

// E[#occupied labels after m draws]
double expected_occupied(const FrequencyModel& model, std::uint64_t m);

// E[#occupied labels] of the poissonized scheme at absolute intensity t:
// sum_k (1 - e^{-p_k t})
double v_function(const FrequencyModel& model, double t);

// E[#labels with the given parity pattern] for the poissonized scheme with
// intensity n over the checkpoint grid (pattern 0 = seen but all even)
double expected_pattern_mean(const FrequencyModel& model, double n,
                             const std::vector<double>& times, std::uint32_t pattern);

// E[e^{i theta U} | occupancy] = phi_eps(theta)^{odd_count}; real by symmetry
double conditional_chf(double theta, std::uint64_t odd_count, const EpsilonLaw& eps);

}  // namespace karlin
