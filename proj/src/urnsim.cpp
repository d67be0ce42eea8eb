#include "karlin/urnsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "karlin/kahan.hpp"
#include "karlin/limitlaw.hpp"
#include "karlin/quadrature.hpp"

namespace karlin {

namespace {

constexpr std::uint64_t kDenseLabels = 1024;
constexpr std::size_t kMaxCheckpoints = 20;

struct UrnCell {
  std::uint32_t pattern = 0;
  std::int32_t first = -1;  // window index of the first draw, -1 = unseen
};

void validate_times(const std::vector<double>& times) {
  if (times.empty() || times.size() > kMaxCheckpoints)
    throw std::invalid_argument("simulate: 1.." + std::to_string(kMaxCheckpoints) +
                                " checkpoints required");
  if (!(times.front() > 0.0))
    throw std::invalid_argument("simulate: times must be positive");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw std::invalid_argument("simulate: times must be strictly increasing");
}

// smallest power-of-two head length K with scale * p(K) <= 1e-3, so the
// factorial-moment tail beyond K is accurate to ~(scale*p)^3 relative order
std::uint64_t series_head(const FrequencyModel& model, double scale) {
  std::uint64_t k = 1024;
  while (scale * model.p(k) > 1e-3) {
    if (k >= (1ull << 26))
      throw numerical_error("series head exceeded 2^26 labels; scale too large");
    k *= 2;
  }
  return k;
}

}  // namespace

SimResult simulate(const ZipfSampler& sampler, const SimConfig& cfg, Rng& rng,
                   const EpsilonLaw* marks, std::uint64_t mark_key) {
  validate_times(cfg.times);
  if (cfg.n == 0) throw std::invalid_argument("simulate: n must be positive");
  std::size_t d = cfg.times.size();
  double nd = static_cast<double>(cfg.n);
  if (nd * cfg.times.back() >= 9.0e18)
    throw std::range_error("simulate: total draw count overflows");

  // per-window draw counts
  std::vector<std::uint64_t> win(d);
  std::uint64_t prev = 0;
  for (std::size_t j = 0; j < d; ++j) {
    if (cfg.poissonized) {
      double width = cfg.times[j] - (j ? cfg.times[j - 1] : 0.0);
      win[j] = rng.poisson(nd * width);
    } else {
      auto m_j = static_cast<std::uint64_t>(nd * cfg.times[j]);
      win[j] = m_j - prev;
      prev = m_j;
    }
  }

  std::uint32_t full = static_cast<std::uint32_t>((1ull << d) - 1);
  std::vector<std::uint32_t> upmask(d);
  for (std::size_t i = 0; i < d; ++i) upmask[i] = (~0u << i) & full;

  std::vector<UrnCell> dense(kDenseLabels);
  std::unordered_map<std::uint64_t, UrnCell> sparse;
  sparse.reserve(1 << 12);

  std::uint64_t total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    std::uint32_t up = upmask[i];
    for (std::uint64_t c = 0; c < win[i]; ++c) {
      std::uint64_t label = sampler.sample(rng);
      UrnCell& cell = label < kDenseLabels ? dense[label] : sparse[label];
      if (cell.first < 0) cell.first = static_cast<std::int32_t>(i);
      cell.pattern ^= up;
    }
    total += win[i];
  }

  SimResult out;
  out.odd.assign(d, 0);
  out.occupied.assign(d, 0);
  out.pattern_counts.assign(1ull << d, 0);
  out.throws = total;
  if (marks) {
    out.u.assign(d, 0.0);
    out.z.assign(d, 0.0);
    out.u_head.assign(d, 0.0);
    out.u_tail.assign(d, 0.0);
    out.k_cut = cfg.k_cut ? cfg.k_cut : sampler.model().nu(nd);
  }

  auto fold = [&](std::uint64_t label, const UrnCell& cell) {
    ++out.distinct;
    out.max_label = std::max(out.max_label, label);
    ++out.pattern_counts[cell.pattern];
    double eps = 0.0;
    bool head = false;
    if (marks) {
      eps = marks->sample_keyed(mark_key, label);
      head = label <= out.k_cut;
    }
    for (std::size_t j = 0; j < d; ++j) {
      bool odd_j = (cell.pattern >> j) & 1u;
      bool occ_j = cell.first <= static_cast<std::int32_t>(j);
      out.odd[j] += odd_j;
      out.occupied[j] += occ_j;
      if (marks) {
        if (odd_j) {
          out.u[j] += eps;
          (head ? out.u_head : out.u_tail)[j] += eps;
        }
        if (occ_j) out.z[j] += eps;
      }
    }
  };

  for (std::uint64_t label = 1; label < kDenseLabels; ++label)
    if (dense[label].first >= 0) fold(label, dense[label]);
  for (const auto& [label, cell] : sparse) fold(label, cell);
  return out;
}

double odd_prob(double p_k, std::uint64_t m) {
  if (!(p_k > 0.0 && p_k <= 1.0)) throw std::invalid_argument("odd_prob: p outside (0,1]");
  if (m == 0) return 0.0;
  double g = 1.0 - 2.0 * p_k;
  if (g == 0.0) return 0.5;
  double md = static_cast<double>(m);
  double lg = g > 0.0 ? std::log1p(-2.0 * p_k) : std::log(-g);
  bool flip = g < 0.0 && (m & 1ull);
  if (flip) return 0.5 * (1.0 + std::exp(md * lg));
  return -0.5 * std::expm1(md * lg);
}

double expected_odd(const FrequencyModel& model, std::uint64_t m) {
  if (m == 0) return 0.0;
  double md = static_cast<double>(m);
  std::uint64_t head = series_head(model, 2.0 * md);
  KahanSum s;
  for (std::uint64_t k = head; k >= 1; --k) s.add(odd_prob(model.p(k), m));
  double t1 = model.tail_power_sum(1, head);
  double t2 = model.tail_power_sum(2, head);
  double t3 = model.tail_power_sum(3, head);
  // exact binomial-moment expansion of (1 - (1-2p)^m)/2 over the tail
  s.add(md * t1 - md * (md - 1.0) * t2 +
        (2.0 / 3.0) * md * (md - 1.0) * (md - 2.0) * t3);
  return s.s;
}

double expected_occupied(const FrequencyModel& model, std::uint64_t m) {
  if (m == 0) return 0.0;
  double md = static_cast<double>(m);
  std::uint64_t head = series_head(model, md);
  KahanSum s;
  for (std::uint64_t k = head; k >= 1; --k)
    s.add(-std::expm1(md * std::log1p(-model.p(k))));
  double t1 = model.tail_power_sum(1, head);
  double t2 = model.tail_power_sum(2, head);
  double t3 = model.tail_power_sum(3, head);
  s.add(md * t1 - md * (md - 1.0) / 2.0 * t2 +
        md * (md - 1.0) * (md - 2.0) / 6.0 * t3);
  return s.s;
}

double v_function(const FrequencyModel& model, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("v_function: t must be nonnegative");
  if (t == 0.0) return 0.0;
  std::uint64_t head = series_head(model, t);
  KahanSum s;
  for (std::uint64_t k = head; k >= 1; --k) s.add(-std::expm1(-t * model.p(k)));
  double t1 = model.tail_power_sum(1, head);
  double t2 = model.tail_power_sum(2, head);
  double t3 = model.tail_power_sum(3, head);
  s.add(t * t1 - t * t / 2.0 * t2 + t * t * t / 6.0 * t3);
  return s.s;
}

double expected_pattern_mean(const FrequencyModel& model, double n,
                             const std::vector<double>& times, std::uint32_t pattern) {
  if (!(n > 0.0)) throw std::invalid_argument("expected_pattern_mean: n must be positive");
  double td = times.back();
  std::array<double, 3> a = poisson_pattern_coeffs(times, pattern);
  if (pattern == 0) {
    // subtract the never-seen event e^{-r t_d}; the linear terms cancel
    a[0] += td;
    a[1] -= td * td / 2.0;
    a[2] += td * td * td / 6.0;
  }
  std::uint64_t head = series_head(model, 2.0 * td * n);
  KahanSum s;
  for (std::uint64_t k = head; k >= 1; --k) {
    double r = n * model.p(k);
    double f = poisson_pattern_prob(r, times, pattern);
    if (pattern == 0) f -= std::exp(-r * td);
    s.add(f);
  }
  double t1 = model.tail_power_sum(1, head);
  double t2 = model.tail_power_sum(2, head);
  double t3 = model.tail_power_sum(3, head);
  s.add(a[0] * n * t1 + a[1] * n * n * t2 + a[2] * n * n * n * t3);
  return s.s;
}

double conditional_chf(double theta, std::uint64_t odd_count, const EpsilonLaw& eps) {
  if (odd_count == 0) return 1.0;
  double phi = eps.chf(theta);
  if (phi == 0.0) return 0.0;
  double mag = std::exp(static_cast<double>(odd_count) * std::log(std::fabs(phi)));
  bool flip = phi < 0.0 && (odd_count & 1ull);
  return flip ? -mag : mag;
}

}  // namespace karlin
