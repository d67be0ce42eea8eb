#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "karlin/rng.hpp"

namespace karlin {

enum class Exec { Serial, Parallel };

// Pairwise reduction; the summation tree depends only on n, so results are
// reproducible across runs and thread counts.
inline double tree_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return tree_sum(x, h) + tree_sum(x + h, n - h);
}

inline double tree_sum(const std::vector<double>& x) { return tree_sum(x.data(), x.size()); }

// Runs fn(rep, rng) for rep = 0..replicates-1, each on rng stream
// derive_stream(master_seed, rep, 0); roles >= 1 stay free for caller-side
// keys (e.g. per-label marks). Output order is by replicate index, so the
// result is byte-identical between Serial and Parallel and for any OpenMP
// thread count. The first exception thrown by a replicate is rethrown after
// the loop drains.
template <class F>
auto run_replicates(std::uint64_t master_seed, std::size_t replicates, Exec exec, F&& fn)
    -> std::vector<std::invoke_result_t<F&, std::size_t, Rng&>> {
  using R = std::invoke_result_t<F&, std::size_t, Rng&>;
  static_assert(!std::is_void_v<R>, "run_replicates: fn must return a value");
  if (replicates == 0) throw std::invalid_argument("run_replicates: replicates must be positive");
  std::vector<R> out(replicates);
  if (exec == Exec::Serial) {
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      Rng rng(derive_stream(master_seed, rep, 0));
      out[rep] = fn(rep, rng);
    }
    return out;
  }
  std::atomic<bool> failed{false};
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(replicates); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    auto rep = static_cast<std::size_t>(i);
    try {
      Rng rng(derive_stream(master_seed, rep, 0));
      out[rep] = fn(rep, rng);
    } catch (...) {
#pragma omp critical(karlin_farm_first_error)
      {
        if (!first_error) first_error = std::current_exception();
      }
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace karlin
