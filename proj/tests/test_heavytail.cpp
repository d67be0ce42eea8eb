#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "karlin/heavytail.hpp"
#include "karlin/rng.hpp"

using namespace karlin;

namespace {

// sample mean of cos(theta X) with its standard error
std::pair<double, double> ecf_point(const EpsilonLaw& law, double theta, int n,
                                    std::uint64_t seed) {
  Rng r(seed);
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double c = std::cos(theta * law.sample(r));
    s += c;
    s2 += c * c;
  }
  double mean = s / n;
  double var = (s2 / n - mean * mean) / (n - 1.0);
  return {mean, std::sqrt(std::max(var, 1e-30))};
}

}  // namespace

TEST_CASE("pareto chf matches high-precision reference values") {
  auto law = EpsilonLaw::symmetric_pareto(0.8, 1.0);
  CHECK(law.chf(1e-4) == doctest::Approx(0.9991048965007246078).epsilon(1e-12));
  CHECK(law.chf(0.5) == doctest::Approx(0.26788589093491664).epsilon(1e-12));
  CHECK(law.chf(1.0) == doctest::Approx(-0.095521115564118116).epsilon(1e-10));
  CHECK(law.chf(2.0) == doctest::Approx(-0.29035054285554164).epsilon(1e-11));
  CHECK(law.chf(4.0) == doctest::Approx(0.083543330450353789).epsilon(1e-10));
  CHECK(law.chf(10.0) == doctest::Approx(0.030583523535233299).epsilon(1e-10));
  auto law15 = EpsilonLaw::symmetric_pareto(1.5, 1.0);
  CHECK(law15.chf(1.0) == doctest::Approx(-0.031170986777565472).epsilon(1e-9));
  CHECK(law15.chf(0.5) == doctest::Approx(0.48721778603375625).epsilon(1e-11));
  // alpha = 1 branch, including the xmin scaling c = theta * xmin
  auto law1 = EpsilonLaw::symmetric_pareto(1.0, 1.0);
  CHECK(law1.chf(1.0) == doctest::Approx(-0.084410950559573887).epsilon(1e-10));
  auto law1b = EpsilonLaw::symmetric_pareto(1.0, 2.0);
  CHECK(law1b.chf(0.3) == doctest::Approx(0.23573510459758837).epsilon(1e-11));
  // symmetry and normalization
  CHECK(law.chf(-2.0) == law.chf(2.0));
  CHECK(law.chf(0.0) == 1.0);
}

TEST_CASE("scale constant in the small-theta expansion of 1 - chf") {
  CHECK(sigma_eps_alpha(0.5, 1.0) == doctest::Approx(1.2533141373155003).epsilon(1e-13));
  CHECK(sigma_eps_alpha(0.8, 1.0) == doctest::Approx(1.4186487255269969).epsilon(1e-13));
  CHECK(sigma_eps_alpha(1.5, 2.0) == doctest::Approx(5.0132565492620010).epsilon(1e-13));
  CHECK(sigma_eps_alpha(1.0, 1.0) == doctest::Approx(1.5707963267948966).epsilon(1e-13));

  // (1 - chf(theta)) / theta^alpha -> tail_constant * that scale as theta -> 0
  for (double alpha : {0.5, 0.8, 1.2}) {
    auto law = EpsilonLaw::symmetric_pareto(alpha, 1.0);
    double theta = 1e-6;
    double ratio = (1.0 - law.chf(theta)) / std::pow(theta, alpha);
    CHECK(ratio == doctest::Approx(sigma_eps_alpha(alpha, law.tail_constant())).epsilon(2e-2));
  }
  auto st = EpsilonLaw::exact_stable(0.8, 1.0);
  double theta = 1e-8;
  CHECK((1.0 - st.chf(theta)) / std::pow(theta, 0.8) ==
        doctest::Approx(sigma_eps_alpha(0.8, st.tail_constant())).epsilon(1e-6));
}

TEST_CASE("stable tail constant at the frozen reference point") {
  auto st = EpsilonLaw::exact_stable(0.8, 1.0);
  CHECK(st.tail_constant() == doctest::Approx(0.70489613249997595).epsilon(1e-13));
}

TEST_CASE("samplers are consistent with their own chf") {
  const int n = 400000;
  struct Case {
    EpsilonLaw law;
    double theta;
    std::uint64_t seed;
  };
  std::vector<Case> cases = {
      {EpsilonLaw::symmetric_pareto(0.8, 1.0), 0.7, 101},
      {EpsilonLaw::symmetric_pareto(1.5, 1.0), 1.3, 102},
      {EpsilonLaw::symmetric_pareto(1.0, 2.0), 0.4, 103},
      {EpsilonLaw::exact_stable(0.8, 1.0), 0.9, 104},
      {EpsilonLaw::exact_stable(1.3, 2.0), 0.5, 105},
      {EpsilonLaw::exact_stable(1.0, 1.0), 1.1, 106},
      {EpsilonLaw::rademacher(), 0.8, 107},
  };
  for (const auto& c : cases) {
    auto [mean, se] = ecf_point(c.law, c.theta, n, c.seed);
    INFO("kind=", static_cast<int>(c.law.kind()), " alpha=", c.law.alpha());
    CHECK(std::fabs(mean - c.law.chf(c.theta)) < 4.5 * se);
  }
}

TEST_CASE("keyed draws are deterministic, order-free, and law-identical") {
  auto law = EpsilonLaw::symmetric_pareto(0.8, 1.0);
  CHECK(law.sample_keyed(42, 7) == law.sample_keyed(42, 7));
  CHECK(law.sample_keyed(42, 7) != law.sample_keyed(42, 8));
  CHECK(law.sample_keyed(42, 7) != law.sample_keyed(43, 7));

  // keyed stream matches the chf as well
  double theta = 0.7;
  double s = 0.0, s2 = 0.0;
  const int n = 400000;
  for (int i = 1; i <= n; ++i) {
    double c = std::cos(theta * law.sample_keyed(99, static_cast<std::uint64_t>(i)));
    s += c;
    s2 += c * c;
  }
  double mean = s / n;
  double se = std::sqrt((s2 / n - mean * mean) / (n - 1.0));
  CHECK(std::fabs(mean - law.chf(theta)) < 4.5 * se);

  auto rad = EpsilonLaw::rademacher();
  double m = 0.0;
  for (int i = 1; i <= 100000; ++i) m += rad.sample_keyed(5, static_cast<std::uint64_t>(i));
  CHECK(std::fabs(m) < 4.5 * std::sqrt(100000.0));
  CHECK(std::fabs(rad.sample_keyed(5, 123)) == 1.0);
}

TEST_CASE("hill estimator recovers the tail index") {
  auto law = EpsilonLaw::symmetric_pareto(0.8, 1.0);
  Rng r(2024);
  std::vector<double> x(200000);
  for (auto& v : x) v = law.sample(r);
  double a1 = hill_estimate(x, 2000);
  CHECK(a1 == doctest::Approx(0.8).epsilon(0.08));

  auto st = EpsilonLaw::exact_stable(1.5, 1.0);
  for (auto& v : x) v = st.sample(r);
  double a2 = hill_estimate(x, 500);
  CHECK(a2 == doctest::Approx(1.5).epsilon(0.12));

  CHECK_THROWS_AS(hill_estimate(x, 0), std::invalid_argument);
  CHECK_THROWS_AS(hill_estimate(x, x.size()), std::invalid_argument);
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(EpsilonLaw::symmetric_pareto(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonLaw::symmetric_pareto(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonLaw::exact_stable(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sigma_eps_alpha(2.0, 1.0), std::invalid_argument);
}
