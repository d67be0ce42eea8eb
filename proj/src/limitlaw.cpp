#include "karlin/limitlaw.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "karlin/heavytail.hpp"
#include "karlin/quadrature.hpp"
#include "karlin/special.hpp"

namespace karlin {

namespace {

constexpr std::uint32_t kMaxGrid = 12;

void validate_grid(const std::vector<double>& times, std::uint32_t pattern,
                   bool allow_zero_pattern = false) {
  if (times.empty() || times.size() > kMaxGrid)
    throw std::invalid_argument("time grid must have 1.." + std::to_string(kMaxGrid) +
                                " points, got " + std::to_string(times.size()));
  if (!(times.front() > 0.0))
    throw std::invalid_argument("time grid must be strictly positive");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw std::invalid_argument("time grid must be strictly increasing");
  if ((pattern == 0 && !allow_zero_pattern) || pattern >> times.size())
    throw std::invalid_argument("pattern must be nonzero and fit the grid");
}

void validate_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("beta must lie in (0,1), got " + std::to_string(beta));
}

// Character expansion of the parity-pattern probability for independent
// Poisson window counts: q(r) = 2^{-d} sum_z c_z exp(-2 r D_z), where z runs
// over {+-1}^d, c_z is the pattern character, and D_z sums the window widths
// whose suffix sign product is -1. For a nonzero pattern sum_z c_z = 0, so
// q(r) = 2^{-d} sum_z c_z expm1(-2 r D_z) exactly -- that form stays accurate
// as r -> 0 where the plain sum cancels catastrophically.
struct ParityKernel {
  std::vector<double> rate;  // 2 D_z
  std::vector<double> sign;  // c_z
  double scale;              // 2^{-d}

  ParityKernel(const std::vector<double>& times, std::uint32_t pattern) {
    std::size_t d = times.size();
    std::vector<double> widths(d);
    for (std::size_t i = 0; i < d; ++i) widths[i] = times[i] - (i ? times[i - 1] : 0.0);
    std::uint32_t n = 1u << d;
    rate.resize(n);
    sign.resize(n);
    scale = 1.0 / static_cast<double>(n);
    for (std::uint32_t m = 0; m < n; ++m) {
      double dsum = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        if (std::popcount(m >> i) & 1u) dsum += widths[i];
      rate[m] = 2.0 * dsum;
      sign[m] = (std::popcount(m & pattern) & 1u) ? -1.0 : 1.0;
    }
  }

  double q(double r) const {
    double s = 0.0;
    for (std::size_t m = 0; m < rate.size(); ++m)
      if (rate[m] > 0.0) s += sign[m] * std::expm1(-rate[m] * r);
    return scale * s;
  }
};

// integral of F(r) beta r^{-beta-1} dr over (0, inf) for F with F(0+) = 0,
// F bounded: split at r = 1, desingularize each piece onto (0,1]. With
// r = u^p, p = 1/(1-beta), the (0,1] piece reduces algebraically to
// p beta F(r)/r, which stays finite as u -> 0.
template <class F>
double levy_integral(const F& f, double beta, double abs_tol) {
  double p = 1.0 / (1.0 - beta);
  auto near_zero = [&](double u) {
    double r = std::max(std::pow(u, p), 1e-300);
    return p * beta * f(r) / r;
  };
  auto far = [&](double v) { return f(std::pow(v, -1.0 / beta)); };
  double a = integrate(near_zero, 0.0, 1.0, abs_tol / 2.0).value;
  double b = integrate(far, 0.0, 1.0, abs_tol / 2.0).value;
  return a + b;
}

struct MergedGrid {
  std::vector<double> times;
  std::uint32_t pattern = 0;
  bool conflict = false;
};

MergedGrid merge_grids(const std::vector<double>& ta, std::uint32_t pa,
                       const std::vector<double>& tb, std::uint32_t pb) {
  MergedGrid out;
  std::size_t i = 0, j = 0;
  std::uint32_t bit = 0;
  while (i < ta.size() || j < tb.size()) {
    bool take_a = j == tb.size() || (i < ta.size() && ta[i] <= tb[j]);
    bool take_b = i == ta.size() || (j < tb.size() && tb[j] <= ta[i]);
    double t = take_a ? ta[i] : tb[j];
    std::uint32_t want = 0;
    if (take_a && take_b && (((pa >> i) ^ (pb >> j)) & 1u)) out.conflict = true;
    if (take_a) want = (pa >> i++) & 1u;
    if (take_b) want = (pb >> j++) & 1u;
    out.times.push_back(t);
    out.pattern |= want << bit++;
  }
  return out;
}

// radius density ~ beta r^{-beta-1} (1 - e^{-r}) / Gamma(1-beta), sampled by
// rejection from the two-piece envelope r^{-beta} on (0,1], r^{-beta-1} on (1,inf)
double sample_radius(double beta, Rng& rng) {
  double w_low = beta / (1.0 - beta);
  double p_low = w_low / (w_low + 1.0);
  for (;;) {
    if (rng.unit() < p_low) {
      double r = std::pow(rng.unit(), 1.0 / (1.0 - beta));
      if (rng.unit() * r < -std::expm1(-r)) return r;
    } else {
      double r = std::pow(rng.unit(), -1.0 / beta);
      if (rng.unit() < -std::expm1(-r)) return r;
    }
  }
}

}  // namespace

double lepage_series_scale(double alpha, double beta, double tmax) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("lepage_series_scale: alpha must lie in (0,2)");
  validate_beta(beta);
  double c_alpha = 1.0 / sigma_eps_alpha(alpha, 1.0);
  return std::pow(c_alpha * std::tgamma(1.0 - beta), 1.0 / alpha) *
         std::pow(tmax, beta / alpha);
}

double poisson_pattern_prob(double r, const std::vector<double>& times,
                            std::uint32_t pattern) {
  validate_grid(times, pattern, true);
  if (!(r >= 0.0))
    throw std::invalid_argument("poisson_pattern_prob: rate must be nonnegative");
  ParityKernel k(times, pattern);
  return (pattern == 0 ? 1.0 : 0.0) + k.q(r);
}

std::array<double, 3> poisson_pattern_coeffs(const std::vector<double>& times,
                                             std::uint32_t pattern) {
  validate_grid(times, pattern, true);
  ParityKernel k(times, pattern);
  std::array<double, 3> c{0.0, 0.0, 0.0};
  for (std::size_t m = 0; m < k.rate.size(); ++m) {
    double r = k.rate[m];
    c[0] -= k.sign[m] * r;
    c[1] += k.sign[m] * r * r / 2.0;
    c[2] -= k.sign[m] * r * r * r / 6.0;
  }
  for (auto& v : c) v *= k.scale;
  return c;
}

double m_delta(const std::vector<double>& times, std::uint32_t pattern, double beta,
               double abs_tol) {
  validate_grid(times, pattern);
  validate_beta(beta);
  ParityKernel k(times, pattern);
  return levy_integral([&](double r) { return k.q(r); }, beta, abs_tol);
}

double field_cov(const std::vector<double>& times_a, std::uint32_t pattern_a,
                 const std::vector<double>& times_b, std::uint32_t pattern_b, double beta,
                 double abs_tol) {
  validate_grid(times_a, pattern_a);
  validate_grid(times_b, pattern_b);
  validate_beta(beta);
  ParityKernel ka(times_a, pattern_a);
  ParityKernel kb(times_b, pattern_b);
  MergedGrid merged = merge_grids(times_a, pattern_a, times_b, pattern_b);
  if (merged.conflict)
    return levy_integral([&](double r) { return -ka.q(r) * kb.q(r); }, beta, abs_tol);
  if (merged.times.size() > 20)
    throw std::invalid_argument("field_cov: merged grid exceeds 20 points");
  ParityKernel kj(merged.times, merged.pattern);
  return levy_integral([&](double r) { return kj.q(r) - ka.q(r) * kb.q(r); }, beta,
                       abs_tol);
}

double bifbm_cov(double s, double t, double beta) {
  validate_beta(beta);
  if (!(s > 0.0 && t > 0.0)) throw std::invalid_argument("bifbm_cov: times must be positive");
  return std::tgamma(1.0 - beta) * std::exp2(beta - 2.0) *
         (std::pow(s + t, beta) - std::pow(std::fabs(s - t), beta));
}

double chf_u(const std::vector<double>& a, const std::vector<double>& times, double alpha,
             double beta, double sigma_alpha, double abs_tol) {
  if (a.size() != times.size())
    throw std::invalid_argument("chf_u: frequency vector and grid sizes differ");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("chf_u: alpha outside (0,2)");
  double acc = 0.0;
  std::uint32_t npat = 1u << times.size();
  for (std::uint32_t pat = 1; pat < npat; ++pat) {
    double w = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((pat >> j) & 1u) w += a[j];
    if (w == 0.0) continue;
    acc += std::pow(std::fabs(w), alpha) * m_delta(times, pat, beta, abs_tol);
  }
  return std::exp(-sigma_alpha * acc);
}

double chf_z(const std::vector<double>& a, const std::vector<double>& times, double alpha,
             double beta, double sigma_alpha) {
  if (a.size() != times.size())
    throw std::invalid_argument("chf_z: frequency vector and grid sizes differ");
  validate_grid(times, 1);
  validate_beta(beta);
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("chf_z: alpha outside (0,2)");
  double acc = 0.0;
  double suffix = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    suffix += a[k];
    double prev = k ? times[k - 1] : 0.0;
    acc += std::pow(std::fabs(suffix), alpha) *
           (std::pow(times[k], beta) - std::pow(prev, beta));
  }
  return std::exp(-sigma_alpha * std::tgamma(1.0 - beta) * acc);
}

std::vector<double> ztp_parity_probs(double lambda, const std::vector<double>& cells) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ztp_parity_probs: lambda must be positive");
  std::size_t d = cells.size();
  if (d == 0 || d > kMaxGrid) throw std::invalid_argument("ztp_parity_probs: bad cell count");
  double csum = 0.0;
  for (double c : cells) {
    if (!(c > 0.0)) throw std::invalid_argument("ztp_parity_probs: cells must be positive");
    csum += c;
  }
  if (csum > 1.0 + 1e-12) throw std::invalid_argument("ztp_parity_probs: cells exceed mass 1");
  std::uint32_t n = 1u << d;
  // pgf of the zero-truncated count: G(x) = (e^{lambda(x-1)} - e^{-lambda}) / (1 - e^{-lambda});
  // character value s(z) = 1 - 2 * sum of cells with suffix sign -1
  std::vector<double> wh(n);
  double em = std::exp(-lambda);
  for (std::uint32_t m = 0; m < n; ++m) {
    double flip = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      if (std::popcount(m >> i) & 1u) flip += cells[i];
    double s = 1.0 - 2.0 * flip;
    wh[m] = (std::exp(lambda * (s - 1.0)) - em) / (1.0 - em);
  }
  // Walsh-Hadamard transform: out[eta] = 2^{-d} sum_m (-1)^{popcount(m & eta)} wh[m]
  for (std::uint32_t len = 1; len < n; len <<= 1)
    for (std::uint32_t b = 0; b < n; b += len << 1)
      for (std::uint32_t i = b; i < b + len; ++i) {
        double x = wh[i], y = wh[i + len];
        wh[i] = x + y;
        wh[i + len] = x - y;
      }
  for (auto& p : wh) p = std::max(p / n, 0.0);
  return wh;
}

std::vector<double> lepage_sample(const std::vector<double>& times, const LepageConfig& cfg,
                                  Rng& rng) {
  validate_grid(times, 1);
  validate_beta(cfg.beta);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0))
    throw std::invalid_argument("lepage_sample: alpha must lie in (0,2)");
  std::size_t d = times.size();
  if (cfg.terms == 0) return std::vector<double>(d, 0.0);  // empty sum
  double tmax = times.back();
  std::vector<double> cells(d);
  for (std::size_t i = 0; i < d; ++i)
    cells[i] = (times[i] - (i ? times[i - 1] : 0.0)) / tmax;
  std::vector<double> cum(d);
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) cum[i] = (acc += cells[i]);
  cum[d - 1] = 1.0;
  double inv_alpha = 1.0 / cfg.alpha;
  std::vector<double> out(d, 0.0);
  std::vector<double> probs;
  double gamma_arrival = 0.0;
  for (std::size_t j = 0; j < cfg.terms; ++j) {
    gamma_arrival += rng.exponential();
    double weight = std::pow(gamma_arrival, -inv_alpha);
    double eps = rng.unit() < 0.5 ? -1.0 : 1.0;
    double r = sample_radius(cfg.beta, rng);
    std::uint32_t eta = 0;
    if (r <= 30.0) {
      // zero-truncated Poisson count by inversion, then direct cell drops
      double u = rng.unit();
      double pk = r / std::expm1(r);  // P(K=1)
      double cdf = pk;
      std::uint64_t kcount = 1;
      while (u > cdf && kcount < 400) {
        ++kcount;
        pk *= r / static_cast<double>(kcount);
        cdf += pk;
      }
      if (d == 1) {
        eta = static_cast<std::uint32_t>(kcount & 1u);
      } else {
        std::uint32_t parity = 0;
        for (std::uint64_t point = 0; point < kcount; ++point) {
          double pos = rng.unit();
          for (std::size_t i = 0; i < d; ++i) {
            if (pos < cum[i]) {
              parity ^= ~0u << i;  // flips parities of all checkpoints >= i
              break;
            }
          }
        }
        eta = parity & ((1u << d) - 1u);
      }
    } else {
      probs = ztp_parity_probs(r, cells);
      double u = rng.unit();
      double cdf = 0.0;
      std::uint32_t pick = 0;
      for (std::uint32_t e = 0; e < probs.size(); ++e) {
        cdf += probs[e];
        if (u < cdf) {
          pick = e;
          break;
        }
        pick = e;
      }
      eta = pick;
    }
    if (eta == 0) continue;
    for (std::size_t i = 0; i < d; ++i)
      if ((eta >> i) & 1u) out[i] += eps * weight;
  }
  double s0 = lepage_series_scale(cfg.alpha, cfg.beta, tmax);
  for (auto& v : out) v *= s0;
  return out;
}

double lepage_tail_mean_bound(const LepageConfig& cfg, double tmax) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::domain_error("lepage_tail_mean_bound: requires alpha < 1");
  if (cfg.terms < 1)
    throw std::domain_error("lepage_tail_mean_bound: bound derived for at least one kept term");
  double j = static_cast<double>(cfg.terms);
  double ratio = std::exp(std::lgamma(j + 1.0 - 1.0 / cfg.alpha) - std::lgamma(j));
  return lepage_series_scale(cfg.alpha, cfg.beta, tmax) * ratio * cfg.alpha /
         (1.0 - cfg.alpha);
}

double lepage_tail_chf_bound(double a_abs, const LepageConfig& cfg, double tmax) {
  double j = static_cast<double>(cfg.terms);
  double s = 2.0 / cfg.alpha;
  if (!(j + 1.0 - s > 0.0))
    throw std::domain_error("lepage_tail_chf_bound: truncation too short for the bound");
  double c = std::fabs(a_abs) * lepage_series_scale(cfg.alpha, cfg.beta, tmax);
  double ratio = std::exp(std::lgamma(j + 1.0 - s) - std::lgamma(j));
  return 0.5 * c * c * ratio / (s - 1.0);
}

GaussianField::GaussianField(std::vector<FieldPoint> points, double beta, double abs_tol)
    : n_(points.size()) {
  if (n_ == 0 || n_ > 1000) throw std::invalid_argument("GaussianField: 1..1000 points");
  cov_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j) {
      double c = field_cov(points[i].times, points[i].pattern, points[j].times,
                           points[j].pattern, beta, abs_tol);
      cov_[i * n_ + j] = c;
      cov_[j * n_ + i] = c;
    }
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n_; ++i) max_diag = std::max(max_diag, cov_[i * n_ + i]);
  for (double jitter : {0.0, 1e-12 * max_diag, 1e-8 * max_diag}) {
    chol_.assign(n_ * n_, 0.0);
    bool ok = true;
    for (std::size_t i = 0; i < n_ && ok; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double s = cov_[i * n_ + j] + (i == j ? jitter : 0.0);
        for (std::size_t k = 0; k < j; ++k) s -= chol_[i * n_ + k] * chol_[j * n_ + k];
        if (i == j) {
          if (!(s > 0.0)) {
            ok = false;
            break;
          }
          chol_[i * n_ + i] = std::sqrt(s);
        } else {
          chol_[i * n_ + j] = s / chol_[j * n_ + j];
        }
      }
    }
    if (ok) return;
  }
  throw numerical_error("GaussianField: covariance matrix is not positive definite");
}

std::vector<double> GaussianField::sample(Rng& rng) const {
  std::vector<double> z(n_);
  for (auto& v : z) v = rng.normal();
  std::vector<double> x(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) x[i] += chol_[i * n_ + j] * z[j];
  return x;
}

}  // namespace karlin
