#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "karlin/rng.hpp"

namespace karlin {

// Parity-pattern functionals of the scaling limit. A pattern is a bitmask over
// the time grid: bit j is the required count parity at times[j]. Patterns must
// be nonzero; grids are strictly increasing and positive. Grid size <= 12 here
// (cost grows as 2^d per integrand evaluation).

// Mean functional m^delta(t): occupancy-weighted parity-pattern intensity,
// computed by adaptive quadrature after desingularizing substitutions.
double m_delta(const std::vector<double>& times, std::uint32_t pattern, double beta,
               double abs_tol = 1e-10);

// Covariance of the centered Gaussian pattern-count field between points
// (times_a, pattern_a) and (times_b, pattern_b). Coinciding times with
// contradictory parities are handled (the joint probability is then 0).
double field_cov(const std::vector<double>& times_a, std::uint32_t pattern_a,
                 const std::vector<double>& times_b, std::uint32_t pattern_b, double beta,
                 double abs_tol = 1e-10);

// Closed form of field_cov for d = 1 odd-parity points:
// Gamma(1-beta) 2^{beta-2} ((s+t)^beta - |s-t|^beta).
double bifbm_cov(double s, double t, double beta);

// Characteristic function of the odd-occupancy limit vector at `times`:
// exp(-sigma_alpha * sum_{pattern != 0} |<a,pattern>|^alpha m^pattern).
double chf_u(const std::vector<double>& a, const std::vector<double>& times, double alpha,
             double beta, double sigma_alpha, double abs_tol = 1e-10);

// Characteristic function of the occupancy limit vector:
// exp(-sigma_alpha * Gamma(1-beta) * sum_k |sum_{j>=k} a_j|^alpha (t_k^beta - t_{k-1}^beta)).
double chf_z(const std::vector<double>& a, const std::vector<double>& times, double alpha,
             double beta, double sigma_alpha);

// Parity-pattern law of a zero-truncated Poisson(lambda) point count dropped
// uniformly into consecutive cells of the given widths (sum <= 1; checkpoints
// are the cell right edges). Entry eta of the result is P(pattern eta).
std::vector<double> ztp_parity_probs(double lambda, const std::vector<double>& cells);

// P(parity pattern at the checkpoints) for independent Poisson window counts
// with means r * (times[i] - times[i-1]). Pattern 0 (all even) includes the
// empty configuration.
double poisson_pattern_prob(double r, const std::vector<double>& times,
                            std::uint32_t pattern);

// Taylor coefficients of poisson_pattern_prob in r at r = 0: the r^1..r^3
// terms (the constant is 1 for pattern 0 and 0 otherwise).
std::array<double, 3> poisson_pattern_coeffs(const std::vector<double>& times,
                                             std::uint32_t pattern);

struct LepageConfig {
  double alpha = 0.8;
  double beta = 0.5;
  std::size_t terms = 10000;  // series truncation J
};

// Overall series scale: (Gamma(1-beta) / sigma_eps_alpha(alpha,1))^{1/alpha} *
// tmax^{beta/alpha}; the sampler emits this factor times the normalized sum.
double lepage_series_scale(double alpha, double beta, double tmax);

// One replicate of the truncated shot-noise series for (U(t_1),...,U(t_d)).
std::vector<double> lepage_sample(const std::vector<double>& times, const LepageConfig& cfg,
                                  Rng& rng);

// Bound on E|remainder| of the truncated series (requires alpha < 1).
double lepage_tail_mean_bound(const LepageConfig& cfg, double tmax);

// Bound on |chf(S_inf) - chf(S_J)| at frequency magnitude a_abs.
double lepage_tail_chf_bound(double a_abs, const LepageConfig& cfg, double tmax);

struct FieldPoint {
  std::vector<double> times;
  std::uint32_t pattern = 1;
};

// Centered Gaussian vector with the pattern-count field covariance; Cholesky
// factor is built once, with a small diagonal jitter escalation if the matrix
// is numerically semidefinite.
class GaussianField {
 public:
  GaussianField(std::vector<FieldPoint> points, double beta, double abs_tol = 1e-10);

  std::size_t dim() const { return n_; }
  double covariance(std::size_t i, std::size_t j) const { return cov_[i * n_ + j]; }
  std::vector<double> sample(Rng& rng) const;

 private:
  std::size_t n_;
  std::vector<double> cov_;
  std::vector<double> chol_;
};

}  // namespace karlin
