#pragma once

// Reference values computed along closed-form routes that are independent of
// the library's quadrature code paths: exponentials with coefficients summing
// to zero integrate against beta r^{-beta-1} dr to -Gamma(1-beta) sum c_i
// lambda_i^beta, so every parity functional reduces to a finite character sum.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

// q(r) = sum_i coef[i] exp(-rate[i] r); coefficients sum to zero for any
// nonzero parity pattern
struct ExpSum {
  std::vector<double> coef;
  std::vector<double> rate;
};

inline ExpSum pattern_expsum(const std::vector<double>& times, std::uint32_t pattern) {
  std::size_t d = times.size();
  ExpSum s;
  std::uint32_t n = 1u << d;
  for (std::uint32_t z = 0; z < n; ++z) {
    double dz = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      if (std::popcount(z >> i) & 1u) dz += times[i] - (i ? times[i - 1] : 0.0);
    double cz = (std::popcount(z & pattern) & 1u) ? -1.0 : 1.0;
    s.coef.push_back(std::ldexp(cz, -static_cast<int>(d)));
    s.rate.push_back(2.0 * dz);
  }
  return s;
}

inline double m_delta_closed(const std::vector<double>& times, std::uint32_t pattern,
                             double beta) {
  ExpSum s = pattern_expsum(times, pattern);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.coef.size(); ++i)
    acc += s.coef[i] * std::pow(s.rate[i], beta);
  return -std::tgamma(1.0 - beta) * acc;
}

inline double field_cov_closed(const std::vector<double>& ta, std::uint32_t pa,
                               const std::vector<double>& tb, std::uint32_t pb,
                               double beta) {
  std::vector<std::pair<double, std::uint32_t>> pts;
  for (std::size_t i = 0; i < ta.size(); ++i) pts.emplace_back(ta[i], (pa >> i) & 1u);
  for (std::size_t j = 0; j < tb.size(); ++j) pts.emplace_back(tb[j], (pb >> j) & 1u);
  std::sort(pts.begin(), pts.end());
  std::vector<double> tm;
  std::uint32_t pm = 0;
  bool conflict = false;
  std::uint32_t bit = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double t = pts[k].first;
    std::uint32_t want = pts[k].second;
    if (k + 1 < pts.size() && pts[k + 1].first == t) {
      if (pts[k + 1].second != want) conflict = true;
      ++k;
    }
    tm.push_back(t);
    pm |= want << bit++;
  }
  ExpSum qa = pattern_expsum(ta, pa);
  ExpSum qb = pattern_expsum(tb, pb);
  double g = std::tgamma(1.0 - beta);
  double prod = 0.0;
  for (std::size_t i = 0; i < qa.coef.size(); ++i)
    for (std::size_t j = 0; j < qb.coef.size(); ++j)
      prod += qa.coef[i] * qb.coef[j] * std::pow(qa.rate[i] + qb.rate[j], beta);
  if (conflict) return g * prod;
  ExpSum qj = pattern_expsum(tm, pm);
  double joint = 0.0;
  for (std::size_t i = 0; i < qj.coef.size(); ++i)
    joint += qj.coef[i] * std::pow(qj.rate[i], beta);
  return -g * (joint - prod);
}

// parity of a Poisson(lambda) count conditioned to be nonzero
inline double ztp_odd_prob(double lambda) {
  return std::expm1(-2.0 * lambda) / (2.0 * std::expm1(-lambda));
}

}  // namespace oracle
