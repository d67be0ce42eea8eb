#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "karlin/farm.hpp"
#include "karlin/freq.hpp"
#include "karlin/heavytail.hpp"
#include "karlin/rng.hpp"
#include "karlin/urnsim.hpp"

using karlin::Exec;
using karlin::run_replicates;
using karlin::tree_sum;

namespace {

double draw_mix(std::size_t rep, karlin::Rng& rng) {
  double s = static_cast<double>(rep);
  for (int i = 0; i < 64; ++i) s += rng.unit();
  return s + rng.normal() + static_cast<double>(rng.poisson(3.0));
}

}  // namespace

TEST_CASE("pairwise sum is deterministic and accurate") {
  std::vector<double> x;
  karlin::Rng rng(31337);
  long double exact = 0.0L;
  for (int i = 0; i < 10123; ++i) {
    double v = rng.uniform(-1.0, 1.0) / (1.0 + i);
    x.push_back(v);
    exact += static_cast<long double>(v);
  }
  double s1 = tree_sum(x);
  double s2 = tree_sum(x.data(), x.size());
  CHECK(s1 == s2);
  CHECK(std::fabs(s1 - static_cast<double>(exact)) < 1e-13);
  CHECK(tree_sum(nullptr, 0) == 0.0);
  std::vector<double> ones(1000, 1.0);
  CHECK(tree_sum(ones) == 1000.0);
}

TEST_CASE("serial and parallel replicate runs agree exactly") {
  auto serial = run_replicates(2024, 64, Exec::Serial, draw_mix);
  auto parallel = run_replicates(2024, 64, Exec::Parallel, draw_mix);
  CHECK(serial == parallel);

  int saved = omp_get_max_threads();
  for (int threads : {1, 3, 7}) {
    omp_set_num_threads(threads);
    CHECK(run_replicates(2024, 64, Exec::Parallel, draw_mix) == serial);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("replicate streams depend only on the replicate index") {
  auto a = run_replicates(99, 10, Exec::Serial, draw_mix);
  auto b = run_replicates(99, 20, Exec::Parallel, draw_mix);
  for (std::size_t r = 0; r < a.size(); ++r) CHECK(a[r] == b[r]);
  auto c = run_replicates(100, 10, Exec::Serial, draw_mix);
  CHECK(a != c);
}

TEST_CASE("simulation farm reproduces across execution modes") {
  karlin::FrequencyModel model = karlin::FrequencyModel::pure_power(0.5);
  karlin::ZipfSampler sampler(model);
  karlin::EpsilonLaw marks = karlin::EpsilonLaw::rademacher();
  auto fn = [&](std::size_t rep, karlin::Rng& rng) {
    karlin::SimConfig cfg;
    cfg.n = 500;
    cfg.times = {0.5, 1.0};
    karlin::SimResult s =
        karlin::simulate(sampler, cfg, rng, &marks, karlin::derive_stream(7, rep, 1));
    return s.u.back();
  };
  auto serial = run_replicates(7, 32, Exec::Serial, fn);
  auto parallel = run_replicates(7, 32, Exec::Parallel, fn);
  CHECK(serial == parallel);
}

TEST_CASE("replicate errors propagate and zero replicates are rejected") {
  auto bad = [](std::size_t rep, karlin::Rng&) -> double {
    if (rep == 17) throw std::runtime_error("boom");
    return 0.0;
  };
  CHECK_THROWS_AS(run_replicates(1, 32, Exec::Serial, bad), std::runtime_error);
  CHECK_THROWS_AS(run_replicates(1, 32, Exec::Parallel, bad), std::runtime_error);
  auto ok = [](std::size_t, karlin::Rng&) { return 1.0; };
  CHECK_THROWS_AS(run_replicates(1, 0, Exec::Serial, ok), std::invalid_argument);
}
