#include "karlin/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "karlin/csvio.hpp"
#include "karlin/farm.hpp"
#include "karlin/freq.hpp"
#include "karlin/heavytail.hpp"
#include "karlin/kahan.hpp"
#include "karlin/limitlaw.hpp"
#include "karlin/urnsim.hpp"
#include "karlin/verify.hpp"
#include "karlin/version.hpp"

namespace karlin {

using nlohmann::json;

namespace {

[[noreturn]] void domain_error(const std::string& what) { throw std::invalid_argument(what); }

void check(bool ok, const std::string& what) {
  if (!ok) domain_error(what);
}

void check_times(const std::vector<double>& times, std::size_t max_d) {
  check(!times.empty(), "times: at least one checkpoint required");
  check(times.size() <= max_d,
        "times: at most " + std::to_string(max_d) + " checkpoints supported");
  check(times.front() > 0.0, "times: checkpoints must be positive");
  for (std::size_t j = 1; j < times.size(); ++j)
    check(times[j] > times[j - 1], "times: checkpoints must be strictly increasing");
}

void check_law(const RunConfig& c) {
  if (c.law == "rademacher") return;
  check(c.alpha > 0.0 && c.alpha < 2.0, "alpha: domain (0,2)");
  if (c.law == "pareto")
    check(c.xmin > 0.0, "xmin: must be positive");
  else if (c.law == "stable")
    check(c.scale > 0.0, "scale: must be positive");
  else
    domain_error("law: one of rademacher|pareto|stable");
}

EpsilonLaw make_law(const RunConfig& c) {
  if (c.law == "rademacher") return EpsilonLaw::rademacher();
  if (c.law == "pareto") return EpsilonLaw::symmetric_pareto(c.alpha, c.xmin);
  return EpsilonLaw::exact_stable(c.alpha, c.scale);
}

FrequencyModel make_model(const RunConfig& c) {
  return c.family == "pure" ? FrequencyModel::pure_power(c.beta)
                            : FrequencyModel::log_perturbed(c.beta);
}

std::string bit_label(std::uint32_t pattern, std::size_t d) {
  std::string s(d, '0');
  for (std::size_t j = 0; j < d; ++j)
    if ((pattern >> j) & 1u) s[j] = '1';
  return s;
}

struct FieldSpec {
  std::vector<FieldPoint> pts;
  std::vector<std::string> labels;
};

FieldSpec parse_field_points(const std::vector<std::string>& texts) {
  FieldSpec spec;
  check(!texts.empty(), "points: at least one field point required");
  check(texts.size() <= 1000, "points: at most 1000 field points supported");
  for (const auto& text : texts) {
    auto at = text.find('@');
    check(at != std::string::npos && at > 0 && at + 1 < text.size(),
          "points: expected t1,t2,...@bits, got '" + text + "'");
    FieldPoint pt;
    std::string head = text.substr(0, at);
    std::size_t pos = 0;
    while (pos <= head.size()) {
      auto comma = head.find(',', pos);
      if (comma == std::string::npos) comma = head.size();
      std::size_t used = 0;
      std::string piece = head.substr(pos, comma - pos);
      double v = 0.0;
      try {
        v = std::stod(piece, &used);
      } catch (const std::exception&) {
        domain_error("points: bad time '" + piece + "'");
      }
      check(used == piece.size(), "points: bad time '" + piece + "'");
      pt.times.push_back(v);
      pos = comma + 1;
    }
    check_times(pt.times, 10);
    pt.pattern = parse_pattern(text.substr(at + 1), pt.times.size());
    check(pt.pattern != 0, "points: pattern must have at least one odd checkpoint");
    spec.pts.push_back(pt);
    spec.labels.push_back(text);
  }
  return spec;
}

std::string resolve_out(const std::string& out) {
  const char* dir = std::getenv("KARLIN_OUT_DIR");
  if (!dir || !*dir || out.empty()) return out;
  std::filesystem::path p(out);
  if (p.is_absolute()) return out;
  return (std::filesystem::path(dir) / p).string();
}

void apply_thread_env() {
  const char* env = std::getenv("KARLIN_THREADS");
  if (!env || !*env) return;
  int v = std::atoi(env);
  if (v >= 1) omp_set_num_threads(v);
}

// Writes a table as CSV or JSON depending on cfg.format; both carry the
// library version and the full resolved config. An empty output path prints
// the table to the echo stream instead of a file.
void emit_table(const RunConfig& cfg, const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows, std::ostream& echo) {
  std::string content;
  if (cfg.format == "csv") {
    CsvWriter w({std::string("karlin ") + kVersion, "config " + cfg.to_json().dump()}, columns);
    for (const auto& r : rows) w.add_row(r);
    content = w.str();
  } else {
    json doc;
    doc["version"] = kVersion;
    doc["config"] = cfg.to_json();
    doc["columns"] = columns;
    doc["rows"] = rows;
    content = doc.dump(2) + "\n";
  }
  if (cfg.out.empty()) {
    echo << content;
    return;
  }
  std::string path = resolve_out(cfg.out);
  atomic_write_file(path, content);
  echo << "wrote " << path << " (" << rows.size() << " rows)\n";
}

int run_freq_table(const RunConfig& cfg, std::ostream& echo) {
  FrequencyModel model = make_model(cfg);
  std::vector<std::vector<double>> rows;
  rows.reserve(cfg.kmax);
  KahanSum cum;
  for (std::uint64_t k = 1; k <= cfg.kmax; ++k) {
    double pk = model.p(k);
    cum.add(pk);
    rows.push_back({static_cast<double>(k), pk, cum.s});
  }
  emit_table(cfg, {"k", "p_k", "cum_k"}, rows, echo);
  return 0;
}

int run_freq_nu(const RunConfig& cfg, std::ostream& echo) {
  FrequencyModel model = make_model(cfg);
  auto n = static_cast<std::uint64_t>(std::llround(cfg.x));
  Normalizations norms = model.normalizations(n, cfg.alpha);
  echo << "nu=" << model.nu(cfg.x) << "\n";
  echo << "d_n=" << norms.d_n << "\n";
  echo << "b_n=" << format_full(norms.b_n) << "\n";
  echo << "sigma_n=" << format_full(norms.sigma_n) << "\n";
  return 0;
}

int run_eps(const RunConfig& cfg, std::ostream& echo) {
  EpsilonLaw law = make_law(cfg);
  std::vector<std::vector<double>> rows;
  for (double theta : parse_grid(cfg.grid)) rows.push_back({theta, law.chf(theta)});
  emit_table(cfg, {"theta", "chf"}, rows, echo);
  return 0;
}

int run_simulate(const RunConfig& cfg, std::ostream& echo) {
  std::size_t d = cfg.times.size();
  std::size_t npat = std::size_t{1} << d;
  std::vector<std::string> columns = {"rep", "checkpoint", "K", "Ustar", "U", "Z", "U1", "U2"};
  for (std::uint32_t delta = 0; delta < npat; ++delta)
    columns.push_back("M_" + bit_label(delta, d));

  std::vector<std::vector<double>> rows;
  if (cfg.n == 0) {
    rows.emplace_back(columns.size(), 0.0);
  } else {
    FrequencyModel model = make_model(cfg);
    ZipfSampler sampler(model);
    EpsilonLaw marks = make_law(cfg);
    auto runs = run_replicates(cfg.seed, cfg.reps, Exec::Parallel, [&](std::size_t r, Rng& rng) {
      SimConfig sc;
      sc.n = cfg.n;
      sc.times = cfg.times;
      sc.k_cut = cfg.kcut;
      return simulate(sampler, sc, rng, &marks, derive_stream(cfg.seed, r, 1));
    });
    rows.reserve(runs.size() * d);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const SimResult& s = runs[r];
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> row = {static_cast<double>(r),
                                   cfg.times[j],
                                   static_cast<double>(s.occupied[j]),
                                   static_cast<double>(s.odd[j]),
                                   s.u[j],
                                   s.z[j],
                                   s.u_head[j],
                                   s.u_tail[j]};
        for (std::uint64_t m : s.pattern_counts) row.push_back(static_cast<double>(m));
        rows.push_back(std::move(row));
      }
    }
  }
  emit_table(cfg, columns, rows, echo);
  return 0;
}

int run_mdelta(const RunConfig& cfg, std::ostream& echo) {
  std::uint32_t pattern = parse_pattern(cfg.delta, cfg.times.size());
  double v = m_delta(cfg.times, pattern, cfg.beta, cfg.tol);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", cfg.precision, v);
  echo << buf << "\n";
  return 0;
}

int run_chf(const RunConfig& cfg, std::ostream& echo) {
  std::size_t d = cfg.times.size();
  std::vector<double> w = cfg.direction.empty() ? std::vector<double>(d, 1.0) : cfg.direction;
  double sig = cfg.sigma > 0.0 ? cfg.sigma : sigma_eps_alpha(cfg.alpha, 1.0);
  std::vector<std::vector<double>> rows;
  for (double a : parse_grid(cfg.grid)) {
    std::vector<double> av(d);
    for (std::size_t j = 0; j < d; ++j) av[j] = a * w[j];
    rows.push_back({a, chf_u(av, cfg.times, cfg.alpha, cfg.beta, sig, cfg.tol),
                    chf_z(av, cfg.times, cfg.alpha, cfg.beta, sig)});
  }
  emit_table(cfg, {"a", "chf_u", "chf_z"}, rows, echo);
  return 0;
}

int run_lepage(const RunConfig& cfg, std::ostream& echo) {
  LepageConfig lc;
  lc.alpha = cfg.alpha;
  lc.beta = cfg.beta;
  lc.terms = cfg.terms;
  auto runs = run_replicates(cfg.seed, cfg.reps, Exec::Parallel, [&](std::size_t, Rng& rng) {
    return lepage_sample(cfg.times, lc, rng);
  });
  std::size_t d = cfg.times.size();
  std::vector<std::string> columns = {"rep"};
  for (std::size_t j = 1; j <= d; ++j) columns.push_back("u" + std::to_string(j));
  std::vector<std::vector<double>> rows;
  rows.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<double> row = {static_cast<double>(r)};
    row.insert(row.end(), runs[r].begin(), runs[r].end());
    rows.push_back(std::move(row));
  }
  try {
    if (cfg.alpha < 1.0)
      echo << "mean-abs truncation bound: "
           << format_full(lepage_tail_mean_bound(lc, cfg.times.back())) << "\n";
    else
      echo << "chf truncation bound at |a|=1: "
           << format_full(lepage_tail_chf_bound(1.0, lc, cfg.times.back())) << "\n";
  } catch (const std::domain_error&) {
    // truncation too short for either bound formula; paths are still valid
  }
  emit_table(cfg, columns, rows, echo);
  return 0;
}

int run_gaussian_field(const RunConfig& cfg, std::ostream& echo) {
  FieldSpec spec = parse_field_points(cfg.points);
  GaussianField field(spec.pts, cfg.beta, cfg.tol);
  auto runs = run_replicates(cfg.seed, cfg.reps, Exec::Parallel,
                             [&](std::size_t, Rng& rng) { return field.sample(rng); });
  std::vector<std::string> columns = {"rep"};
  for (std::size_t i = 1; i <= spec.pts.size(); ++i) columns.push_back("x" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  rows.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::vector<double> row = {static_cast<double>(r)};
    row.insert(row.end(), runs[r].begin(), runs[r].end());
    rows.push_back(std::move(row));
  }
  emit_table(cfg, columns, rows, echo);
  return 0;
}

int run_verify_suite(const RunConfig& cfg, std::ostream& echo) {
  SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.exec = Exec::Parallel;
  opts.quick = cfg.quick;
  SuiteResult res = run_acceptance_suite(opts);

  json gates = json::array();
  std::size_t passed = 0;
  for (const auto& rep : res.reports) {
    bool ok = rep.pass();
    passed += ok ? 1 : 0;
    echo << (ok ? "[PASS] " : "[FAIL] ") << rep.name << "\n";
    json checks = json::array();
    for (const auto& chk : rep.checks) {
      if (!chk.pass)
        echo << "  FAIL " << chk.name << " observed=" << format_full(chk.observed)
             << " target=" << format_full(chk.target) << " tol=" << format_full(chk.tolerance)
             << "\n";
      checks.push_back({{"name", chk.name},
                        {"pass", chk.pass},
                        {"observed", chk.observed},
                        {"target", chk.target},
                        {"tolerance", chk.tolerance},
                        {"detail", chk.detail}});
    }
    json params = json::object();
    for (const auto& kv : rep.config) params[kv.first] = kv.second;
    gates.push_back({{"name", rep.name},
                     {"seed", rep.seed},
                     {"pass", ok},
                     {"params", params},
                     {"checks", checks}});
  }
  json doc;
  doc["version"] = kVersion;
  doc["config"] = cfg.to_json();
  doc["pass"] = res.pass();
  doc["gates"] = gates;

  std::string path = resolve_out(cfg.out.empty() ? "report.json" : cfg.out);
  atomic_write_file(path, doc.dump(2) + "\n");
  echo << passed << "/" << res.reports.size() << " gates passed\n";
  echo << "wrote " << path << "\n";
  return res.pass() ? 0 : 3;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  auto c1 = text.find(':');
  auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  check(c1 != std::string::npos && c2 != std::string::npos,
        "grid: expected start:step:stop, got '" + text + "'");
  double start = 0.0, step = 0.0, stop = 0.0;
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    std::string s1 = text.substr(0, c1), s2 = text.substr(c1 + 1, c2 - c1 - 1),
                s3 = text.substr(c2 + 1);
    start = std::stod(s1, &u1);
    step = std::stod(s2, &u2);
    stop = std::stod(s3, &u3);
    check(u1 == s1.size() && u2 == s2.size() && u3 == s3.size(),
          "grid: bad number in '" + text + "'");
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    domain_error("grid: bad number in '" + text + "'");
  }
  check(step > 0.0, "grid: step must be positive");
  check(stop >= start - 1e-12, "grid: stop must be >= start");
  double count_real = std::floor((stop - start) / step + 1e-9) + 1.0;
  check(count_real <= 1e6, "grid: more than 1e6 points");
  auto count = static_cast<std::size_t>(count_real);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

std::uint32_t parse_pattern(const std::string& bits, std::size_t d) {
  check(bits.size() == d, "pattern: bitstring length must equal the number of checkpoints");
  std::uint32_t mask = 0;
  for (std::size_t j = 0; j < d; ++j) {
    check(bits[j] == '0' || bits[j] == '1', "pattern: bitstring chars must be 0 or 1");
    if (bits[j] == '1') mask |= 1u << j;
  }
  return mask;
}

json RunConfig::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["law"] = law;
  j["xmin"] = xmin;
  j["scale"] = scale;
  j["family"] = family;
  j["n"] = n;
  j["times"] = times;
  j["delta"] = delta;
  j["kmax"] = kmax;
  j["x"] = x;
  j["reps"] = reps;
  j["J"] = terms;
  j["kcut"] = kcut;
  j["seed"] = seed;
  j["tol"] = tol;
  j["precision"] = precision;
  j["grid"] = grid;
  j["direction"] = direction;
  j["sigma"] = sigma;
  j["points"] = points;
  j["quick"] = quick;
  j["out"] = out;
  j["format"] = format;
  return j;
}

void RunConfig::merge_json(const json& j, const std::vector<std::string>& cli_set_keys) {
  check(j.is_object(), "config: expected a JSON object");
  auto given = [&](const char* key) {
    return std::find(cli_set_keys.begin(), cli_set_keys.end(), key) != cli_set_keys.end();
  };
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (given(key.c_str())) continue;
    const json& v = item.value();
    try {
      if (key == "subcommand")
        subcommand = v.get<std::string>();
      else if (key == "beta")
        beta = v.get<double>();
      else if (key == "alpha")
        alpha = v.get<double>();
      else if (key == "law")
        law = v.get<std::string>();
      else if (key == "xmin")
        xmin = v.get<double>();
      else if (key == "scale")
        scale = v.get<double>();
      else if (key == "family")
        family = v.get<std::string>();
      else if (key == "n")
        n = v.get<std::uint64_t>();
      else if (key == "times")
        times = v.get<std::vector<double>>();
      else if (key == "delta")
        delta = v.get<std::string>();
      else if (key == "kmax")
        kmax = v.get<std::uint64_t>();
      else if (key == "x")
        x = v.get<double>();
      else if (key == "reps")
        reps = v.get<std::uint64_t>();
      else if (key == "J")
        terms = v.get<std::uint64_t>();
      else if (key == "kcut")
        kcut = v.get<std::uint64_t>();
      else if (key == "seed")
        seed = v.get<std::uint64_t>();
      else if (key == "tol")
        tol = v.get<double>();
      else if (key == "precision")
        precision = v.get<int>();
      else if (key == "grid")
        grid = v.get<std::string>();
      else if (key == "direction")
        direction = v.get<std::vector<double>>();
      else if (key == "sigma")
        sigma = v.get<double>();
      else if (key == "points")
        points = v.get<std::vector<std::string>>();
      else if (key == "quick")
        quick = v.get<bool>();
      else if (key == "out")
        out = v.get<std::string>();
      else if (key == "format")
        format = v.get<std::string>();
      else
        domain_error("config: unknown key '" + key + "'");
    } catch (const json::exception&) {
      domain_error("config: wrong type for key '" + key + "'");
    }
  }
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  c.merge_json(j, {});
  return c;
}

void RunConfig::validate() const {
  check(format == "csv" || format == "json", "format: one of csv|json");
  check(family == "pure" || family == "logperturbed", "family: one of pure|logperturbed");
  auto need_beta = [&] { check(beta > 0.0 && beta < 1.0, "beta: domain (0,1)"); };
  auto need_alpha = [&] { check(alpha > 0.0 && alpha < 2.0, "alpha: domain (0,2)"); };
  auto need_reps = [&](std::uint64_t cap) {
    check(reps >= 1 && reps <= cap, "reps: domain [1," + std::to_string(cap) + "]");
  };

  if (subcommand == "freq-table") {
    need_beta();
    check(kmax >= 1 && kmax <= 100000000ull, "kmax: domain [1,1e8]");
  } else if (subcommand == "freq-nu") {
    need_beta();
    need_alpha();
    check(x >= 1.0 && x <= 1e18, "x: domain [1,1e18]");
  } else if (subcommand == "eps") {
    check_law(*this);
    parse_grid(grid);
  } else if (subcommand == "simulate") {
    need_beta();
    need_alpha();
    check_law(*this);
    check(n <= 100000000ull, "n: domain [0,1e8]");
    check_times(times, 10);
    need_reps(1000000);
    check(kcut <= 1000000000000ull, "kcut: domain [0,1e12]");
  } else if (subcommand == "mdelta") {
    need_beta();
    check_times(times, 10);
    check(parse_pattern(delta, times.size()) != 0,
          "delta: pattern must have at least one odd checkpoint");
    check(tol > 0.0 && tol <= 1e-2, "tol: domain (0,1e-2]");
    check(precision >= 1 && precision <= 17, "precision: domain [1,17]");
  } else if (subcommand == "chf") {
    need_beta();
    need_alpha();
    check_times(times, 10);
    parse_grid(grid);
    if (!direction.empty()) {
      check(direction.size() == times.size(),
            "direction: length must equal the number of checkpoints");
      bool all_zero = true;
      for (double v : direction) all_zero = all_zero && v == 0.0;
      check(!all_zero, "direction: must be nonzero");
    }
    check(sigma >= 0.0, "sigma: must be >= 0 (0 = derive)");
    check(tol > 0.0 && tol <= 1e-2, "tol: domain (0,1e-2]");
  } else if (subcommand == "lepage") {
    need_beta();
    need_alpha();
    check_times(times, 10);
    check(terms <= 10000000ull, "J: domain [0,1e7]");
    need_reps(10000000);
  } else if (subcommand == "gaussian-field") {
    need_beta();
    parse_field_points(points);
    need_reps(10000000);
    check(tol > 0.0 && tol <= 1e-2, "tol: domain (0,1e-2]");
  } else if (subcommand == "verify-suite") {
    // seed and quick have full domains; out defaults to report.json
  } else {
    domain_error("unknown subcommand '" + subcommand + "'");
  }
}

int run(const RunConfig& cfg, std::ostream& echo) {
  apply_thread_env();
  cfg.validate();
  if (cfg.subcommand == "freq-table") return run_freq_table(cfg, echo);
  if (cfg.subcommand == "freq-nu") return run_freq_nu(cfg, echo);
  if (cfg.subcommand == "eps") return run_eps(cfg, echo);
  if (cfg.subcommand == "simulate") return run_simulate(cfg, echo);
  if (cfg.subcommand == "mdelta") return run_mdelta(cfg, echo);
  if (cfg.subcommand == "chf") return run_chf(cfg, echo);
  if (cfg.subcommand == "lepage") return run_lepage(cfg, echo);
  if (cfg.subcommand == "gaussian-field") return run_gaussian_field(cfg, echo);
  return run_verify_suite(cfg, echo);
}

}  // namespace karlin
