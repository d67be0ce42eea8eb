#pragma once

#include <cstdint>
#include <vector>

#include "karlin/rng.hpp"

namespace karlin {

// Symmetric mark distribution attached to urn labels. All three kinds are
// symmetric about 0; the two heavy-tailed kinds satisfy
// P(|eps| > x) ~ tail_constant() * x^{-alpha}.
class EpsilonLaw {
 public:
  enum class Kind { Rademacher, SymmetricPareto, ExactStable };

  static EpsilonLaw rademacher();
  static EpsilonLaw symmetric_pareto(double alpha, double xmin);
  static EpsilonLaw exact_stable(double alpha, double scale);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double param() const { return param_; }  // xmin or scale; 1 for Rademacher

  double sample(Rng& rng) const;
  // Deterministic draw addressed by (key, label); independent of visit order.
  double sample_keyed(std::uint64_t key, std::uint64_t label) const;

  // E cos(theta * eps), exact up to ~1e-12.
  double chf(double theta) const;

  // C with P(|eps| > x) -> C x^{-alpha}; 0 for Rademacher (bounded support).
  double tail_constant() const;

 private:
  EpsilonLaw(Kind kind, double alpha, double param);
  double from_uniforms(double ua, double ub) const;

  Kind kind_;
  double alpha_;
  double param_;
};

// Scale constant in 1 - E cos(theta eps) ~ sigma^alpha |theta|^alpha for a
// symmetric law with tail constant c_eps: c_eps * Gamma(1-alpha) cos(pi alpha/2),
// continued through alpha = 1 by c_eps * pi/2.
double sigma_eps_alpha(double alpha, double c_eps);

// Hill tail-index estimator from the k largest magnitudes; returns the
// estimate of alpha.
double hill_estimate(const std::vector<double>& samples, std::size_t k);

}  // namespace karlin
