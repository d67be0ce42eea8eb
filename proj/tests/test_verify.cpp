#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "karlin/farm.hpp"
#include "karlin/heavytail.hpp"
#include "karlin/rng.hpp"
#include "karlin/verify.hpp"

using namespace karlin;

TEST_CASE("summarize matches hand-computed moments") {
  SummaryStats st = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(st.mean == doctest::Approx(2.5).epsilon(1e-15));
  double sd = std::sqrt(5.0 / 3.0);
  CHECK(st.sd == doctest::Approx(sd).epsilon(1e-14));
  CHECK(st.se == doctest::Approx(sd / 2.0).epsilon(1e-14));
  CHECK(st.n == 4);

  SummaryStats single = summarize({7.5});
  CHECK(single.mean == 7.5);
  CHECK(single.sd == 0.0);
  CHECK(single.se == 0.0);

  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("ecf basics: zero probe, constants, input validation") {
  std::vector<std::vector<double>> samples = {{0.3, -1.0}, {1.7, 2.0}, {-0.4, 0.5}};
  EcfEstimate est = ecf(samples, {{0.0, 0.0}, {1.0, 0.5}});
  CHECK(est.re[0] == 1.0);
  CHECK(est.im[0] == 0.0);
  CHECK(est.se_re[0] == 0.0);
  CHECK(est.se_im[0] == 0.0);
  CHECK(est.replicates == 3);
  CHECK(std::fabs(est.re[1]) <= 1.0);

  // zero-valued samples give ecf identically 1 at every probe
  std::vector<std::vector<double>> zeros(5, std::vector<double>{0.0});
  EcfEstimate zest = ecf(zeros, {{2.0}});
  CHECK(zest.re[0] == 1.0);
  CHECK(zest.se_re[0] == 0.0);

  CHECK_THROWS_AS(ecf({{1.0}}, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ecf(samples, {}), std::invalid_argument);
  CHECK_THROWS_AS(ecf(samples, {{1.0}}), std::invalid_argument);
}

TEST_CASE("ecf recovers the Cauchy characteristic function") {
  EpsilonLaw cauchy = EpsilonLaw::exact_stable(1.0, 1.0);
  Rng rng(derive_stream(99, 0, 1));
  std::size_t n = 100000;
  std::vector<std::vector<double>> samples(n);
  for (auto& s : samples) s = {cauchy.sample(rng)};
  EcfEstimate est = ecf(samples, {{1.0}});
  double target = std::exp(-1.0);
  double se = std::hypot(est.se_re[0], est.se_im[0]);
  CHECK(std::fabs(est.re[0] - target) <= 3.0 * se);
  CHECK(std::fabs(est.im[0]) <= 3.0 * se);
}

TEST_CASE("Kolmogorov-Smirnov statistic and p-value") {
  CHECK(ks_statistic_normal({0.0}) == doctest::Approx(0.5).epsilon(1e-15));

  Rng rng(derive_stream(7, 0, 1));
  std::size_t n = 2000;
  std::vector<double> xs(n), shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.normal();
    shifted[i] = xs[i] + 0.5;
  }
  double d_ok = ks_statistic_normal(xs);
  double d_bad = ks_statistic_normal(shifted);
  CHECK(d_ok < 0.05);
  CHECK(ks_p_value(d_ok, n) > 0.01);
  CHECK(d_bad > 0.1);
  CHECK(ks_p_value(d_bad, n) < 1e-6);

  CHECK_THROWS_AS(ks_statistic_normal({}), std::invalid_argument);
  CHECK_THROWS_AS(ks_p_value(0.1, 0), std::invalid_argument);
}

TEST_CASE("chi-square upper tail") {
  CHECK(chi_square_p(0.0, 5) == doctest::Approx(1.0).epsilon(1e-12));
  // dof = 2 reduces to exp(-stat / 2)
  for (double stat : {0.5, 2.0, 7.3})
    CHECK(chi_square_p(stat, 2) == doctest::Approx(std::exp(-0.5 * stat)).epsilon(1e-12));
  CHECK(chi_square_p(10.0, 4) < chi_square_p(5.0, 4));
  CHECK_THROWS_AS(chi_square_p(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(chi_square_p(-1.0, 3), std::invalid_argument);
}

TEST_CASE("jackknife covariance se agrees with direct recomputation") {
  Rng rng(derive_stream(11, 0, 1));
  std::size_t n = 40;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = 0.6 * x[i] + 0.8 * rng.normal();
  }
  auto cov_del = [&](std::size_t skip) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != skip) {
        mx += x[i];
        my += y[i];
      }
    double m = static_cast<double>(n - 1);
    mx /= m;
    my /= m;
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != skip) c += (x[i] - mx) * (y[i] - my);
    return c / (m - 1.0);
  };
  double tbar = 0.0;
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = cov_del(i);
    tbar += theta[i];
  }
  tbar /= static_cast<double>(n);
  double ss = 0.0;
  for (double t : theta) ss += (t - tbar) * (t - tbar);
  double brute = std::sqrt((n - 1.0) / n * ss);
  CHECK(jackknife_cov_se(x, y) == doctest::Approx(brute).epsilon(1e-12));
  CHECK_THROWS_AS(jackknife_cov_se({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(jackknife_cov_se(x, {1.0}), std::invalid_argument);
}

TEST_CASE("odd-count pmf by full enumeration") {
  // two draws from (.5,.3,.2): P(both same label) = .25+.09+.04 = .38 -> 0 odd,
  // else exactly 2 odd; mean .62*2 = 1.24
  std::vector<double> pmf = enumerate_odd_pmf({0.5, 0.3, 0.2}, 2);
  CHECK(pmf[0] == doctest::Approx(0.38).epsilon(1e-14));
  CHECK(pmf[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pmf[2] == doctest::Approx(0.62).epsilon(1e-14));
  double mean = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) mean += static_cast<double>(j) * pmf[j];
  CHECK(mean == doctest::Approx(1.24).epsilon(1e-14));

  // a single label drawn three times is odd with certainty
  std::vector<double> sure = enumerate_odd_pmf({1.0}, 3);
  CHECK(sure[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sure[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("conditional and sign-enumerated characteristic functions agree") {
  std::vector<double> p{0.5, 0.3, 0.2};
  std::vector<std::size_t> cps{2, 4};
  EpsilonLaw rad = EpsilonLaw::rademacher();
  for (const std::vector<double>& a :
       {std::vector<double>{0.7, -0.4}, {0.3, 0.9}, {1.5, 0.2}}) {
    double cond = enumerate_conditional_chf(p, 4, cps, a, rad);
    double joint = enumerate_joint_chf(p, 4, cps, a);
    CHECK(std::fabs(cond - joint) <= 1e-13);
  }
  CHECK(std::fabs(enumerate_conditional_chf(p, 4, cps, {0.7, -0.4}, rad) -
                  0.80528878154427866517) <= 1e-12);
}

TEST_CASE("enumeration input validation") {
  EpsilonLaw rad = EpsilonLaw::rademacher();
  CHECK_THROWS_AS(enumerate_odd_pmf({}, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_odd_pmf({0.5, 0.4}, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_odd_pmf({0.5, 0.5}, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_odd_pmf({0.5, 0.5}, 60), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_conditional_chf({0.5, 0.5}, 4, {2, 2}, {1.0, 1.0}, rad),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_conditional_chf({0.5, 0.5}, 4, {2, 5}, {1.0, 1.0}, rad),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_conditional_chf({0.5, 0.5}, 4, {2, 4}, {1.0}, rad),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_joint_chf({0.5, 0.5}, 4, {2, 4}, {1.0}), std::invalid_argument);
}

TEST_CASE("quadrature-only experiments pass") {
  ExperimentReport anchor = anchor_identity_test();
  CHECK(anchor.pass());
  CHECK(anchor.checks.size() == 3);
  ExperimentReport stat = stationarity_test();
  CHECK(stat.pass());
  ExperimentReport hom = homogeneity_test(1234);
  CHECK(hom.pass());
  CHECK(hom.checks.size() == 5);
}

TEST_CASE("experiments are deterministic and execution-mode independent") {
  ConditioningOptions opts;
  opts.n_sim = 400;
  opts.replicates = 120;
  ExperimentReport a = conditioning_identity_test(opts, 5, Exec::Serial);
  ExperimentReport b = conditioning_identity_test(opts, 5, Exec::Serial);
  ExperimentReport c = conditioning_identity_test(opts, 5, Exec::Parallel);
  REQUIRE(a.checks.size() == b.checks.size());
  REQUIRE(a.checks.size() == c.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].observed == b.checks[i].observed);
    CHECK(a.checks[i].observed == c.checks[i].observed);
    CHECK(a.checks[i].name == c.checks[i].name);
  }
}

TEST_CASE("quick suite: twelve named gates, all green") {
  SuiteOptions opts;
  opts.quick = true;
  SuiteResult res = run_acceptance_suite(opts);
  REQUIRE(res.reports.size() == 12);
  const char* expected[] = {"closed-form-anchor",  "homogeneity",
                            "conditioning-identity", "pattern-lln",
                            "fclt-covariance",     "odd-count-clt",
                            "marked-sum-fdd",      "lepage-law",
                            "self-similarity",     "stationary-increments",
                            "occupancy-fdd",       "tail-index"};
  for (std::size_t i = 0; i < 12; ++i) CHECK(res.reports[i].name == expected[i]);
  for (const auto& rep : res.reports) {
    INFO(rep.name);
    for (const auto& chk : rep.checks) {
      INFO(chk.name, " observed=", chk.observed, " target=", chk.target,
           " tol=", chk.tolerance, " ", chk.detail);
      CHECK(chk.pass);
    }
  }
  CHECK(res.pass());
}
