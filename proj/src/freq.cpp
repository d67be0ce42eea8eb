#include "karlin/freq.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "karlin/kahan.hpp"
#include "karlin/quadrature.hpp"

namespace karlin {

namespace {

constexpr std::uint32_t kHeadSize = 1024;          // alias-table head: labels 1..1023
constexpr std::uint64_t kMaxLabel = 1ull << 62;    // support truncation for samplers/counting
constexpr std::uint64_t kNormalizerTerms = 1000000;

// expm1(t)/t, stable through t = 0
double helper2(double t) {
  if (std::fabs(t) > 1e-8) return std::expm1(t) / t;
  return 1.0 + t * 0.5 * (1.0 + t / 3.0);
}

// log1p(t)/t, stable through t = 0
double helper1(double t) {
  if (std::fabs(t) > 1e-8) return std::log1p(t) / t;
  return 1.0 - t * (0.5 - t / 3.0);
}

// Sum_{k >= j0} k^{-q}: integral + endpoint Euler-Maclaurin corrections
double power_tail(double q, double a) {
  double fa = std::pow(a, -q);
  return std::pow(a, 1.0 - q) / (q - 1.0) + 0.5 * fa + q * fa / a / 12.0 -
         q * (q + 1.0) * (q + 2.0) * fa / (a * a * a) / 720.0;
}

// Sum_{k >= j0} k^{-q}/(1+log k)^jpow: midpoint-rule integral from a = j0 - 1/2,
// mapped to a smooth integrand on (0,1] by x = a w^{-1/(q-1)}, plus the f'/24
// midpoint correction
double log_perturbed_tail(double q, double jpow, double a) {
  double la = std::log(a);
  auto g = [q, jpow, la](double w) {
    return std::pow(1.0 + la - std::log(w) / (q - 1.0), -jpow);
  };
  QuadResult integral = integrate(g, 0.0, 1.0, 1e-13, 2000);
  double c = 1.0 + la;
  double fp = -std::pow(a, -q - 1.0) * std::pow(c, -jpow) * (q + jpow / c);
  return std::pow(a, 1.0 - q) / (q - 1.0) * integral.value + fp / 24.0;
}

}  // namespace

FrequencyModel::FrequencyModel(FreqFamily family, double beta) : family_(family), beta_(beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("FrequencyModel: beta must lie in (0,1), got " +
                                std::to_string(beta));
  q_ = 1.0 / beta;
  // compensated direct summation plus tail; the tail remainder is far below
  // 1e-13 at K = 1e6
  KahanSum s;
  for (std::uint64_t k = kNormalizerTerms - 1; k >= 1; --k) s.add(shape(static_cast<double>(k)));
  double a = static_cast<double>(kNormalizerTerms);
  s.add(family_ == FreqFamily::PurePowerLaw ? power_tail(q_, a)
                                            : log_perturbed_tail(q_, 1.0, a - 0.5));
  z_ = s.s;
}

FrequencyModel FrequencyModel::pure_power(double beta) {
  return FrequencyModel(FreqFamily::PurePowerLaw, beta);
}

FrequencyModel FrequencyModel::log_perturbed(double beta) {
  return FrequencyModel(FreqFamily::LogPerturbed, beta);
}

double FrequencyModel::shape(double x) const {
  double s = std::pow(x, -q_);
  if (family_ == FreqFamily::LogPerturbed) s /= 1.0 + std::log(x);
  return s;
}

double FrequencyModel::p(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("FrequencyModel::p: labels start at 1");
  return shape(static_cast<double>(k)) / z_;
}

double FrequencyModel::tail_sum(std::uint64_t k) const {
  KahanSum s;
  std::uint64_t j0 = std::max<std::uint64_t>(k + 1, 256);
  for (std::uint64_t j = j0 - 1; j > k; --j) s.add(shape(static_cast<double>(j)));
  double a = static_cast<double>(j0);
  s.add(family_ == FreqFamily::PurePowerLaw ? power_tail(q_, a)
                                            : log_perturbed_tail(q_, 1.0, a - 0.5));
  return s.s / z_;
}

double FrequencyModel::tail_power_sum(int pow_j, std::uint64_t k) const {
  if (pow_j < 1 || pow_j > 6)
    throw std::invalid_argument("tail_power_sum: power must lie in 1..6");
  double qq = pow_j * q_;
  double jp = static_cast<double>(pow_j);
  KahanSum s;
  std::uint64_t j0 = std::max<std::uint64_t>(k + 1, 256);
  for (std::uint64_t j = j0 - 1; j > k; --j)
    s.add(std::pow(shape(static_cast<double>(j)), jp));
  double a = static_cast<double>(j0);
  s.add(family_ == FreqFamily::PurePowerLaw ? power_tail(qq, a)
                                            : log_perturbed_tail(qq, jp, a - 0.5));
  return s.s / std::pow(z_, jp);
}

std::uint64_t FrequencyModel::nu(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("nu: requires x >= 0");
  if (x == 0.0 || p(1) < 1.0 / x) return 0;
  double inv_x = 1.0 / x;
  std::uint64_t cand;
  if (family_ == FreqFamily::PurePowerLaw) {
    double c = std::pow(x / z_, beta_);
    if (c >= static_cast<double>(kMaxLabel))
      throw std::range_error("nu: counting window overflow at x=" + std::to_string(x));
    cand = static_cast<std::uint64_t>(c);
    if (cand == 0) cand = 1;
  } else {
    std::uint64_t hi = 2;
    while (p(hi) >= inv_x) {
      if (hi >= kMaxLabel)
        throw std::range_error("nu: counting window overflow at x=" + std::to_string(x));
      hi *= 2;
    }
    std::uint64_t lo = hi / 2;  // p(lo) >= 1/x > p(hi)
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (p(mid) >= inv_x ? lo : hi) = mid;
    }
    cand = lo;
  }
  // settle the boundary against the exact double-precision p_k
  while (p(cand + 1) >= inv_x) ++cand;
  while (cand >= 1 && p(cand) < inv_x) --cand;
  return cand;
}

Normalizations FrequencyModel::normalizations(std::uint64_t n, double alpha) const {
  if (n < 1) throw std::invalid_argument("normalizations: requires n >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("normalizations: alpha must lie in (0,2]");
  Normalizations out;
  out.d_n = nu(static_cast<double>(n));
  if (out.d_n == 0)
    throw std::domain_error("normalizations: horizon too small, nu(n) = 0 at n=" +
                            std::to_string(n));
  out.b_n = std::pow(static_cast<double>(out.d_n), 1.0 / alpha);
  out.sigma_n = std::exp2(beta_ - 1.0) *
                std::sqrt(std::tgamma(1.0 - beta_) * static_cast<double>(out.d_n));
  return out;
}

ZipfSampler::ZipfSampler(const FrequencyModel& model) : model_(&model), q_(model.exponent()) {
  auto h_integral = [this](double x) {
    double lx = std::log(x);
    return helper2((1.0 - q_) * lx) * lx;
  };
  u_infinity_ = 1.0 / (q_ - 1.0);
  u_low_full_ = h_integral(1.5) - 1.0;
  u_low_tail_ = h_integral(kHeadSize + 0.5) - std::pow(static_cast<double>(kHeadSize), -q_);
  auto h_inv = [this](double u) {
    double t = std::max(u * (1.0 - q_), -1.0);
    return std::exp(helper1(t) * u);
  };
  accept_shift_full_ = 2.0 - h_inv(h_integral(2.5) - std::pow(2.0, -q_));
  accept_shift_tail_ =
      (kHeadSize + 1.0) -
      h_inv(h_integral(kHeadSize + 1.5) - std::pow(kHeadSize + 1.0, -q_));

  // Vose alias table over {label 1..kHeadSize-1, escape}
  std::vector<double> w(kHeadSize);
  double total = 0.0;
  for (std::uint32_t i = 0; i + 1 < kHeadSize; ++i) {
    w[i] = model.p(i + 1);
    total += w[i];
  }
  w[kHeadSize - 1] = model.tail_sum(kHeadSize - 1);
  total += w[kHeadSize - 1];
  head_mass_ = total - w[kHeadSize - 1];
  alias_prob_.assign(kHeadSize, 0.0);
  alias_idx_.assign(kHeadSize, 0);
  std::vector<std::uint32_t> small, large;
  std::vector<double> scaled(kHeadSize);
  for (std::uint32_t i = 0; i < kHeadSize; ++i) {
    scaled[i] = w[i] * kHeadSize / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    small.pop_back();
    std::uint32_t l = large.back();
    large.pop_back();
    alias_prob_[s] = scaled[s];
    alias_idx_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::uint32_t i : large) alias_prob_[i] = 1.0;
  for (std::uint32_t i : small) alias_prob_[i] = 1.0;
}

std::uint64_t ZipfSampler::sample_power_tail(Rng& rng, double u_low, std::uint64_t k_min) const {
  auto h_integral = [this](double x) {
    double lx = std::log(x);
    return helper2((1.0 - q_) * lx) * lx;
  };
  double shift = (k_min == 1) ? accept_shift_full_ : accept_shift_tail_;
  for (;;) {
    double u = rng.uniform(u_low, u_infinity_);
    double t = std::max(u * (1.0 - q_), -1.0);
    double x = std::exp(helper1(t) * u);
    if (x >= static_cast<double>(kMaxLabel)) continue;  // support truncation at 2^62
    double kf = std::floor(x + 0.5);
    std::uint64_t k = static_cast<std::uint64_t>(kf);
    if (k < k_min) {
      k = k_min;
      kf = static_cast<double>(k_min);
    }
    if (kf - x <= shift) return k;
    if (u >= h_integral(kf + 0.5) - std::exp(-q_ * std::log(kf))) return k;
  }
}

std::uint64_t ZipfSampler::sample(Rng& rng) const {
  std::uint64_t u = rng.u64();
  std::uint32_t idx = static_cast<std::uint32_t>(u >> 54);
  double frac = static_cast<double>(u & ((1ull << 53) - 1)) * 0x1.0p-53;
  std::uint32_t slot = frac < alias_prob_[idx] ? idx : alias_idx_[idx];
  if (slot + 1 < kHeadSize) return slot + 1;
  if (model_->family() == FreqFamily::PurePowerLaw)
    return sample_power_tail(rng, u_low_tail_, kHeadSize);
  // log-perturbed tail: power-law proposal, accept with the exact shape ratio
  double c = 1.0 + std::log(static_cast<double>(kHeadSize));
  for (;;) {
    std::uint64_t k = sample_power_tail(rng, u_low_tail_, kHeadSize);
    if (rng.unit() < c / (1.0 + std::log(static_cast<double>(k)))) return k;
  }
}

std::uint64_t ZipfSampler::sample_rejection(Rng& rng) const {
  if (model_->family() == FreqFamily::PurePowerLaw)
    return sample_power_tail(rng, u_low_full_, 1);
  for (;;) {
    std::uint64_t k = sample_power_tail(rng, u_low_full_, 1);
    if (rng.unit() < 1.0 / (1.0 + std::log(static_cast<double>(k)))) return k;
  }
}

}  // namespace karlin
