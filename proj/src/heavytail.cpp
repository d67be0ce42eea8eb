#include "karlin/heavytail.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "karlin/quadrature.hpp"
#include "karlin/special.hpp"

namespace karlin {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kAlphaOneBand = 1e-8;

bool near_one(double alpha) { return std::fabs(alpha - 1.0) <= kAlphaOneBand; }

// E cos(theta |X|) for standard Pareto magnitude P(|X|>x) = x^{-alpha}, x >= 1,
// evaluated at c = theta * xmin > 0.
//
// Small c: phi = 1 - c^a G + a c^a S(c) with G = Gamma(1-a) cos(pi a/2)
// (continued through a=1 as pi/2) and
// S(c) = sum_{j>=1} (-1)^{j+1} c^{2j-a} / ((2j)! (2j-a)).
// Large c: phi = a c^a J(c), J(c) = int_c^inf cos(u) u^{-a-1} du, evaluated
// as a partial segment up to a multiple of pi plus an Euler-accelerated
// alternating series of pi-length segments.
double pareto_chf_at(double alpha, double c) {
  if (c <= 4.0) {
    double g = near_one(alpha) ? kPi / 2.0
                               : std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0);
    double s = 0.0;
    double log_c = std::log(c);
    for (int j = 1; j <= 200; ++j) {
      double term = std::exp((2.0 * j - alpha) * log_c - std::lgamma(2.0 * j + 1.0)) /
                    (2.0 * j - alpha);
      if (j % 2 == 0) term = -term;
      s += term;
      if (std::fabs(term) < 1e-18) break;
    }
    return 1.0 - std::pow(c, alpha) * g + alpha * std::pow(c, alpha) * s;
  }
  auto f = [alpha](double u) { return std::cos(u) * std::pow(u, -alpha - 1.0); };
  double m0 = std::ceil(c / kPi);
  double j0 = 0.0;
  if (m0 * kPi > c) j0 = integrate(f, c, m0 * kPi, 1e-15, 200).value;
  double tail = alternating_sum(
      [&](int i) {
        double a = (m0 + i) * kPi;
        return integrate(f, a, a + kPi, 1e-15, 200).value;
      },
      1e-14, 120);
  return alpha * std::pow(c, alpha) * (j0 + tail);
}

}  // namespace

EpsilonLaw::EpsilonLaw(Kind kind, double alpha, double param)
    : kind_(kind), alpha_(alpha), param_(param) {}

EpsilonLaw EpsilonLaw::rademacher() { return EpsilonLaw(Kind::Rademacher, 2.0, 1.0); }

EpsilonLaw EpsilonLaw::symmetric_pareto(double alpha, double xmin) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("symmetric_pareto: alpha must lie in (0,2), got " +
                                std::to_string(alpha));
  if (!(xmin > 0.0)) throw std::invalid_argument("symmetric_pareto: xmin must be positive");
  return EpsilonLaw(Kind::SymmetricPareto, alpha, xmin);
}

EpsilonLaw EpsilonLaw::exact_stable(double alpha, double scale) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("exact_stable: alpha must lie in (0,2), got " +
                                std::to_string(alpha));
  if (!(scale > 0.0)) throw std::invalid_argument("exact_stable: scale must be positive");
  return EpsilonLaw(Kind::ExactStable, alpha, scale);
}

double EpsilonLaw::from_uniforms(double ua, double ub) const {
  switch (kind_) {
    case Kind::Rademacher:
      return ua < 0.5 ? -1.0 : 1.0;
    case Kind::SymmetricPareto: {
      double sign = ua < 0.5 ? -1.0 : 1.0;
      return sign * param_ * std::pow(ub, -1.0 / alpha_);
    }
    case Kind::ExactStable: {
      // Chambers-Mallows-Stuck, symmetric case
      double v = kPi * (ua - 0.5);
      double w = -std::log(ub);
      if (near_one(alpha_)) return param_ * std::tan(v);
      double x = std::sin(alpha_ * v) / std::pow(std::cos(v), 1.0 / alpha_) *
                 std::pow(std::cos((1.0 - alpha_) * v) / w, (1.0 - alpha_) / alpha_);
      return param_ * x;
    }
  }
  return 0.0;
}

double EpsilonLaw::sample(Rng& rng) const {
  double ua = rng.unit();
  double ub = rng.unit();
  return from_uniforms(ua, ub);
}

double EpsilonLaw::sample_keyed(std::uint64_t key, std::uint64_t label) const {
  double ua = u64_to_unit(keyed_u64(key, 2 * label));
  double ub = u64_to_unit(keyed_u64(key, 2 * label + 1));
  return from_uniforms(ua, ub);
}

double EpsilonLaw::chf(double theta) const {
  double t = std::fabs(theta);
  if (t == 0.0) return 1.0;
  switch (kind_) {
    case Kind::Rademacher:
      return std::cos(t);
    case Kind::SymmetricPareto:
      return pareto_chf_at(alpha_, t * param_);
    case Kind::ExactStable:
      return std::exp(-std::pow(t * param_, alpha_));
  }
  return 0.0;
}

double EpsilonLaw::tail_constant() const {
  switch (kind_) {
    case Kind::Rademacher:
      return 0.0;
    case Kind::SymmetricPareto:
      return std::pow(param_, alpha_);
    case Kind::ExactStable:
      return std::pow(param_, alpha_) / sigma_eps_alpha(alpha_, 1.0);
  }
  return 0.0;
}

double sigma_eps_alpha(double alpha, double c_eps) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("sigma_eps_alpha: alpha must lie in (0,2)");
  if (near_one(alpha)) return c_eps * kPi / 2.0;
  return c_eps * std::tgamma(1.0 - alpha) * std::cos(kPi * alpha / 2.0);
}

double hill_estimate(const std::vector<double>& samples, std::size_t k) {
  if (k < 1 || k + 1 > samples.size())
    throw std::invalid_argument("hill_estimate: need 1 <= k < sample count");
  std::vector<double> mag(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) mag[i] = std::fabs(samples[i]);
  std::nth_element(mag.begin(), mag.begin() + k, mag.end(), std::greater<double>());
  double pivot = mag[k];  // (k+1)-th largest magnitude
  if (!(pivot > 0.0)) throw numerical_error("hill_estimate: pivot magnitude is zero");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(mag[i] / pivot);
  return static_cast<double>(k) / s;
}

}  // namespace karlin
