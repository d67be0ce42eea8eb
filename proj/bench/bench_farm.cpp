// Times the replicate farm in serial and OpenMP mode on the urn-simulation
// kernel and checks that both orderings produce identical statistics.
#include <omp.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "karlin/farm.hpp"
#include "karlin/freq.hpp"
#include "karlin/heavytail.hpp"
#include "karlin/limitlaw.hpp"
#include "karlin/rng.hpp"
#include "karlin/urnsim.hpp"

using namespace karlin;

namespace {

struct Timing {
  double seconds;
  double checksum;
};

template <class F>
Timing timed(Exec exec, std::uint64_t seed, std::size_t reps, F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> vals = run_replicates(seed, reps, exec, fn);
  auto t1 = std::chrono::steady_clock::now();
  return {std::chrono::duration<double>(t1 - t0).count(), tree_sum(vals)};
}

void report(const char* name, std::size_t reps, Timing serial, Timing parallel) {
  const char* match = serial.checksum == parallel.checksum ? "identical" : "MISMATCH";
  std::printf("%-14s reps=%-6zu serial %8.3fs (%9.1f/s)  openmp %8.3fs (%9.1f/s)  speedup %5.2fx  checksums %s\n",
              name, reps, serial.seconds, reps / serial.seconds, parallel.seconds,
              reps / parallel.seconds, serial.seconds / parallel.seconds, match);
  if (serial.checksum != parallel.checksum) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t reps = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200;
  std::uint64_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 100000;
  std::uint64_t seed = 42;
  std::printf("threads=%d  draws per replicate n=%llu\n", omp_get_max_threads(),
              static_cast<unsigned long long>(n));

  FrequencyModel model = FrequencyModel::pure_power(0.5);
  ZipfSampler sampler(model);
  std::vector<double> times = {0.5, 1.0};
  EpsilonLaw marks = EpsilonLaw::symmetric_pareto(0.8, 1.0);

  SimConfig sim;
  sim.n = n;
  sim.times = times;
  auto urn_kernel = [&](std::size_t rep, Rng& rng) {
    SimResult res = simulate(sampler, sim, rng, &marks, derive_stream(seed, rep, 1));
    return res.u.back();
  };
  report("urn-simulate", reps, timed(Exec::Serial, seed, reps, urn_kernel),
         timed(Exec::Parallel, seed, reps, urn_kernel));

  LepageConfig lc;
  lc.alpha = 0.8;
  lc.beta = 0.6;
  lc.terms = 20000;
  auto series_kernel = [&](std::size_t, Rng& rng) { return lepage_sample(times, lc, rng).back(); };
  std::size_t series_reps = reps * 5;
  report("stable-series", series_reps, timed(Exec::Serial, seed, series_reps, series_kernel),
         timed(Exec::Parallel, seed, series_reps, series_kernel));
  return 0;
}
