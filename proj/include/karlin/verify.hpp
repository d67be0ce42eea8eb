#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "karlin/farm.hpp"
#include "karlin/heavytail.hpp"

namespace karlin {

// ---------- estimators ----------

struct SummaryStats {
  double mean = 0.0, sd = 0.0, se = 0.0;
  std::size_t n = 0;
};

// Tree-reduced mean / sample sd / standard error of the mean.
SummaryStats summarize(const std::vector<double>& xs);

struct EcfEstimate {
  std::vector<std::vector<double>> grid;  // probe coefficient vectors
  std::vector<double> re, im;             // componentwise means of cos / sin
  std::vector<double> se_re, se_im;       // componentwise standard errors
  std::size_t replicates = 0;
};

// Empirical characteristic function of d-dimensional samples at the given
// probes; needs >= 2 samples and a nonempty grid of matching dimension.
// The probe a = 0 evaluates to exactly 1 with zero standard error.
EcfEstimate ecf(const std::vector<std::vector<double>>& samples,
                const std::vector<std::vector<double>>& grid);

// sup_x |F_n(x) - Phi(x)| against the standard normal (sorts a copy).
double ks_statistic_normal(std::vector<double> xs);
// Asymptotic Kolmogorov p-value with the finite-n effective-size correction.
double ks_p_value(double d_stat, std::size_t n);
// Upper-tail chi-square p-value at the given degrees of freedom.
double chi_square_p(double stat, int dof);
// Delete-one jackknife standard error of the unbiased sample covariance.
double jackknife_cov_se(const std::vector<double>& x, const std::vector<double>& y);

// ---------- enumeration oracles over tiny explicit urns ----------
// All of these walk every one of |p|^n label sequences (capped at 1e7), so
// they are exact up to rounding and independent of the simulator.

// Mark-integrated characteristic function of the marked odd-count vector read
// at the given draw-count checkpoints: E prod_k phi_eps(<a, pattern_k>).
double enumerate_conditional_chf(const std::vector<double>& p, std::size_t n,
                                 const std::vector<std::size_t>& checkpoints,
                                 const std::vector<double>& a, const EpsilonLaw& eps);

// Same quantity for Rademacher marks, with the mark average done by explicit
// sign enumeration (2^|p| terms per sequence) instead of a per-label product.
double enumerate_joint_chf(const std::vector<double>& p, std::size_t n,
                           const std::vector<std::size_t>& checkpoints,
                           const std::vector<double>& a);

// Exact pmf of the odd-count statistic after n draws; entry j = P(count = j).
std::vector<double> enumerate_odd_pmf(const std::vector<double>& p, std::size_t n);

// ---------- seeded experiments ----------

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0, target = 0.0, tolerance = 0.0;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;  // informational; not part of the reproducible payload
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<CheckResult> checks;
  bool pass() const;
};

struct ConditioningOptions {
  std::vector<double> p{0.5, 0.3, 0.2};
  std::size_t n_exact = 4;
  std::vector<std::size_t> checkpoints{2, 4};
  double beta = 0.6;
  double alpha = 0.8;  // sets the probe normalization b_n for the simulated part
  std::uint64_t n_sim = 1000;
  std::size_t replicates = 1000;
};

struct LlnOptions {
  double beta = 0.6;
  std::vector<double> times{0.5, 1.0};
  std::uint64_t n = 1000000;
  std::size_t replicates = 50;
  double rel_cap = 0.05;
};

struct CltCovOptions {
  double beta = 0.5;
  double s = 0.5, t = 1.0;
  std::uint64_t n = 100000;
  std::size_t replicates = 2000;
};

struct KarlinCltOptions {
  double beta = 0.5;
  std::uint64_t n = 1000000;
  std::size_t replicates = 2000;
  double var_band = 0.10;
  double ks_cap = 0.05;
};

struct FddOptions {
  double alpha = 0.8, beta = 0.6;
  std::vector<double> times{0.5, 1.0};
  std::uint64_t n = 100000;
  std::size_t replicates = 5000;
  double ecf_cap = 0.05;
};

struct LepageLawOptions {
  double alpha = 0.8, beta = 0.6;
  std::size_t terms = 10000;
  std::size_t replicates = 100000;
  std::size_t hill_k = 1000;
  double hill_halfwidth = 0.15;
};

struct SelfsimOptions {
  double alpha = 0.8, beta = 0.6;
  double lambda = 2.0;
  std::vector<double> times{0.5, 1.0};
  std::size_t terms = 2000;
  std::size_t replicates = 100000;
  double ecf_cap = 0.03;
};

// Quadrature-only gates (no randomness).
ExperimentReport anchor_identity_test();
ExperimentReport stationarity_test();
ExperimentReport homogeneity_test(std::uint64_t seed);

// Exact enumeration identity plus a paired plain-vs-conditional estimator
// comparison on simulated paths.
ExperimentReport conditioning_identity_test(const ConditioningOptions& opts, std::uint64_t seed,
                                            Exec exec);

// Pattern-count means versus their quadrature targets.
ExperimentReport lln_test(const LlnOptions& opts, std::uint64_t seed, Exec exec);

// Normalized pattern-count fluctuations versus the fractional covariance.
ExperimentReport clt_cov_test(const CltCovOptions& opts, std::uint64_t seed, Exec exec);

// Odd-count central limit: variance band and KS distance to the normal.
ExperimentReport karlin_clt_test(const KarlinCltOptions& opts, std::uint64_t seed, Exec exec);

struct FddReports {
  ExperimentReport marked;     // odd-count marked sums vs chf_u
  ExperimentReport occupancy;  // occupancy marked sums vs chf_z
};
FddReports fdd_convergence_test(const FddOptions& opts, std::uint64_t seed, Exec exec);

struct LepageReports {
  ExperimentReport law;         // series sampler vs the marginal characteristic function
  ExperimentReport tail_index;  // Hill estimate of the sampled marginal
};
LepageReports lepage_law_test(const LepageLawOptions& opts, std::uint64_t seed, Exec exec);

// Scaling identity, exact on characteristic functions and sampled at lambda.
ExperimentReport selfsim_test(const SelfsimOptions& opts, std::uint64_t seed, Exec exec);

struct SuiteOptions {
  std::uint64_t seed = 42;
  Exec exec = Exec::Parallel;
  bool quick = false;  // reduced budgets with widened caps, for smoke runs
};

struct SuiteResult {
  std::vector<ExperimentReport> reports;
  bool pass() const;
};

// Runs the twelve acceptance gates in a fixed order; each experiment draws an
// independent stream derived from the master seed.
SuiteResult run_acceptance_suite(const SuiteOptions& opts);

}  // namespace karlin
