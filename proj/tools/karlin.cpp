#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "karlin/cli.hpp"
#include "karlin/version.hpp"

namespace {

struct OptionRegistry {
  std::vector<std::pair<std::string, CLI::Option*>> entries;
  void track(const std::string& key, CLI::Option* opt) { entries.emplace_back(key, opt); }
  std::vector<std::string> set_keys() const {
    std::vector<std::string> keys;
    for (const auto& [key, opt] : entries)
      if (opt->count() > 0) keys.push_back(key);
    return keys;
  }
};

}  // namespace

int main(int argc, char** argv) {
  karlin::RunConfig cfg;
  std::string config_path;
  OptionRegistry reg;

  CLI::App app{"Urn-scheme simulation and limit-law toolkit"};
  app.set_version_flag("--version", karlin::kVersion);
  app.require_subcommand(1);

  auto opt = [&](CLI::App* sub, const std::string& names, auto& field, const std::string& help) {
    CLI::Option* o = sub->add_option(names, field, help);
    std::string key = names.substr(2, names.find(',') == std::string::npos
                                          ? std::string::npos
                                          : names.find(',') - 2);
    reg.track(key, o);
    return o;
  };
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON file of defaults; explicit flags take precedence");
  };
  auto add_output = [&](CLI::App* sub) {
    opt(sub, "--out", cfg.out, "output path (omit to print the table to stdout)");
    opt(sub, "--format", cfg.format, "output format: csv | json (default csv)");
  };

  CLI::App* ft = app.add_subcommand(
      "freq-table",
      "Emit the label-frequency table. Columns: k = label index, p_k = probability of "
      "label k, cum_k = cumulative probability of labels 1..k.");
  opt(ft, "--beta", cfg.beta, "tail exponent of the frequency law, in (0,1)");
  opt(ft, "--family", cfg.family, "frequency family: pure | logperturbed (experimental)");
  opt(ft, "--kmax", cfg.kmax, "number of labels to tabulate, in [1,1e8]");
  add_output(ft);
  add_config(ft);

  CLI::App* fn = app.add_subcommand(
      "freq-nu",
      "Print nu(x) = #labels with frequency >= 1/x, plus the normalizations at n = "
      "round(x): d_n = nu(n), b_n = d_n^(1/alpha), sigma_n = Gaussian normalizer.");
  opt(fn, "--beta", cfg.beta, "tail exponent of the frequency law, in (0,1)");
  opt(fn, "--family", cfg.family, "frequency family: pure | logperturbed (experimental)");
  opt(fn, "--x", cfg.x, "evaluation point, in [1,1e18]");
  opt(fn, "--alpha", cfg.alpha, "mark tail index used for b_n, in (0,2)");
  add_config(fn);

  CLI::App* ep = app.add_subcommand(
      "eps",
      "Tabulate the mark-law characteristic function. Columns: theta = probe value, chf "
      "= characteristic function at theta.");
  opt(ep, "--law", cfg.law, "mark law: rademacher | pareto | stable");
  opt(ep, "--alpha", cfg.alpha, "mark tail index, in (0,2)");
  opt(ep, "--xmin", cfg.xmin, "pareto threshold (law=pareto), > 0");
  opt(ep, "--scale", cfg.scale, "stable scale (law=stable), > 0");
  opt(ep, "--grid,--chf-grid", cfg.grid, "probe grid start:step:stop, inclusive");
  add_output(ep);
  add_config(ep);

  CLI::App* sim = app.add_subcommand(
      "simulate",
      "Run seeded urn-path replicates; one row per (replicate, checkpoint). Columns: rep "
      "= replicate index, checkpoint = time t_j, K = occupied labels at t_j, Ustar = "
      "odd-count labels at t_j, U = mark sum over odd labels, Z = mark sum over occupied "
      "labels, U1/U2 = head/tail split of U at kcut, M_<bits> = count of labels with the "
      "given parity pattern over the whole grid (char j of <bits> = parity at t_j; the "
      "all-zero pattern counts occupied labels with every parity even). With --n 0 a "
      "single zero-filled row is emitted.");
  opt(sim, "--beta", cfg.beta, "tail exponent of the frequency law, in (0,1)");
  opt(sim, "--alpha", cfg.alpha, "mark tail index, in (0,2)");
  opt(sim, "--family", cfg.family, "frequency family: pure | logperturbed (experimental)");
  opt(sim, "--law", cfg.law, "mark law: rademacher | pareto | stable");
  opt(sim, "--xmin", cfg.xmin, "pareto threshold (law=pareto), > 0");
  opt(sim, "--scale", cfg.scale, "stable scale (law=stable), > 0");
  opt(sim, "--n", cfg.n, "total label draws per replicate, in [0,1e8]");
  opt(sim, "--times", cfg.times, "checkpoint fractions t_1,...,t_d (strictly increasing, d <= 10)")
      ->delimiter(',');
  opt(sim, "--reps", cfg.reps, "number of replicates, in [1,1e6]");
  opt(sim, "--kcut", cfg.kcut, "head/tail label split for U1/U2; 0 = automatic");
  opt(sim, "--seed", cfg.seed, "master seed; replicate streams derive from it");
  add_output(sim);
  add_config(sim);

  CLI::App* md = app.add_subcommand(
      "mdelta",
      "Print the pattern intensity integral for one parity pattern over the checkpoint "
      "grid (delta is a bitstring; char j = parity demanded at checkpoint j).");
  opt(md, "--beta", cfg.beta, "tail exponent, in (0,1)");
  opt(md, "--times", cfg.times, "checkpoints t_1,...,t_d (strictly increasing, d <= 10)")
      ->delimiter(',');
  opt(md, "--delta", cfg.delta, "parity bitstring, same length as --times, not all zero");
  opt(md, "--tol", cfg.tol, "quadrature tolerance, in (0,1e-2]");
  opt(md, "--precision", cfg.precision, "printed significant digits, in [1,17]");
  add_config(md);

  CLI::App* ch = app.add_subcommand(
      "chf",
      "Tabulate the limit characteristic functions along a = s * direction for s on the "
      "grid. Columns: a = grid scalar s, chf_u = odd-count limit chf at a, chf_z = "
      "occupancy limit chf at a.");
  opt(ch, "--alpha", cfg.alpha, "stability index, in (0,2)");
  opt(ch, "--beta", cfg.beta, "tail exponent, in (0,1)");
  opt(ch, "--times", cfg.times, "checkpoints t_1,...,t_d (strictly increasing, d <= 10)")
      ->delimiter(',');
  opt(ch, "--grid,--a-grid", cfg.grid, "scalar grid start:step:stop, inclusive");
  opt(ch, "--direction", cfg.direction, "probe direction w_1,...,w_d (default all ones)")
      ->delimiter(',');
  opt(ch, "--sigma", cfg.sigma, "scale constant; 0 = derive from alpha with unit tail constant");
  opt(ch, "--tol", cfg.tol, "quadrature tolerance, in (0,1e-2]");
  add_output(ch);
  add_config(ch);

  CLI::App* lp = app.add_subcommand(
      "lepage",
      "Sample truncated shot-noise series paths and print the truncation bound. Columns: "
      "rep = replicate index, u1..ud = sampled path value at each checkpoint.");
  opt(lp, "--alpha", cfg.alpha, "stability index, in (0,2)");
  opt(lp, "--beta", cfg.beta, "tail exponent, in (0,1)");
  opt(lp, "--J", cfg.terms, "series truncation (number of atoms), in [0,1e7]");
  opt(lp, "--reps", cfg.reps, "number of replicates, in [1,1e7]");
  opt(lp, "--times", cfg.times, "checkpoints t_1,...,t_d (strictly increasing, d <= 10)")
      ->delimiter(',');
  opt(lp, "--seed", cfg.seed, "master seed; replicate streams derive from it");
  add_output(lp);
  add_config(lp);

  CLI::App* gf = app.add_subcommand(
      "gaussian-field",
      "Sample the centered Gaussian pattern-count limit field at the given points. "
      "Columns: rep = replicate index, x1..xm = field value at each point, in the order "
      "the points were given.");
  opt(gf, "--beta", cfg.beta, "tail exponent, in (0,1)");
  opt(gf, "--point", cfg.points,
      "field point 't1,t2,...@bits' (repeatable); bits = parity pattern over that "
      "point's checkpoints");
  opt(gf, "--reps", cfg.reps, "number of replicates, in [1,1e7]");
  opt(gf, "--tol", cfg.tol, "covariance quadrature tolerance, in (0,1e-2]");
  opt(gf, "--seed", cfg.seed, "master seed; replicate streams derive from it");
  add_output(gf);
  add_config(gf);

  CLI::App* vs = app.add_subcommand(
      "verify-suite",
      "Run the statistical acceptance gates and write a JSON report (schema documented "
      "in docs/output_schema.md). Exits 3 if any gate fails.");
  opt(vs, "--seed", cfg.seed, "master seed for the gate experiments");
  reg.track("quick", vs->add_flag("--quick", cfg.quick,
                                  "reduced replication budgets with widened caps"));
  opt(vs, "--out", cfg.out, "report path (default report.json)");
  add_config(vs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("config: cannot read " + config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
      }
      std::vector<std::string> keys = reg.set_keys();
      keys.push_back("subcommand");
      cfg.merge_json(j, keys);
    }
    return karlin::run(cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
