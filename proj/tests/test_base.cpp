#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "karlin/quadrature.hpp"
#include "karlin/rng.hpp"
#include "karlin/special.hpp"

using namespace karlin;

TEST_CASE("rng determinism and stream separation") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.u64() == b.u64());
  }
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 100; ++i)
    if (a2.u64() != c.u64()) differs = true;
  CHECK(differs);

  CHECK(derive_stream(1, 0, 0) != derive_stream(1, 0, 1));
  CHECK(derive_stream(1, 0, 0) != derive_stream(1, 1, 0));
  CHECK(derive_stream(1, 0, 0) != derive_stream(2, 0, 0));
  CHECK(keyed_u64(7, 0) != keyed_u64(7, 1));
  CHECK(keyed_u64(7, 0) == keyed_u64(7, 0));
}

TEST_CASE("rng uniform bounds") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    double u = r.unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(2.0, 5.0);
    CHECK(u >= 2.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("rng normal moments") {
  Rng r(11);
  const int n = 400000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    s += x;
    s2 += x * x;
  }
  double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("rng poisson moments across both regimes") {
  Rng r(13);
  for (double lambda : {0.7, 3.0, 9.5, 30.0, 400.0}) {
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = static_cast<double>(r.poisson(lambda));
      s += x;
      s2 += x * x;
    }
    double mean = s / n, var = s2 / n - mean * mean;
    double se = std::sqrt(lambda / n);
    CHECK(std::fabs(mean - lambda) < 5.0 * se);
    CHECK(std::fabs(var - lambda) < 0.03 * lambda + 5.0 * lambda * std::sqrt(2.0 / n));
  }
}

TEST_CASE("special functions against closed forms") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) - normal_cdf(-1.0) ==
        doctest::Approx(0.68268949213708585).epsilon(1e-12));
  // gammp(1/2, 1) = erf(1)
  CHECK(gammp(0.5, 1.0) == doctest::Approx(0.84270079294971487).epsilon(1e-12));
  // gammq(1, 1) = exp(-1)
  CHECK(gammq(1.0, 1.0) == doctest::Approx(0.36787944117144232).epsilon(1e-12));
  CHECK(gammp(3.5, 2.0) + gammq(3.5, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kolmogorov_q(0.5) == doctest::Approx(0.96394524366487509).epsilon(1e-12));
  CHECK(kolmogorov_q(1.0) == doctest::Approx(0.26999967167735452).epsilon(1e-12));
  CHECK(kolmogorov_q(1e-3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kolmogorov_q(10.0) < 1e-12);
}

TEST_CASE("adaptive quadrature on smooth and endpoint-singular integrands") {
  auto r1 = integrate([](double x) { return std::sin(x); }, 0.0, 3.141592653589793, 1e-12);
  CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));
  auto r2 = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-8));
  auto r3 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
  CHECK(r3.value == doctest::Approx(1.7724538509055160).epsilon(1e-12));
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10, 50),
                  numerical_error);
}

TEST_CASE("euler-accelerated alternating series") {
  auto s1 = alternating_sum([](int j) { return (j % 2 ? -1.0 : 1.0) / (j + 1); }, 1e-13);
  CHECK(s1 == doctest::Approx(0.69314718055994531).epsilon(1e-12));
  auto s2 = alternating_sum(
      [](int j) {
        double d = static_cast<double>(j + 1);
        return (j % 2 ? -1.0 : 1.0) / (d * d);
      },
      1e-13);
  CHECK(s2 == doctest::Approx(0.82246703342411322).epsilon(1e-12));
}
