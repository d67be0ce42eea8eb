#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace karlin {

// Fully resolved parameters of one command invocation. Serializes losslessly
// to JSON (the same schema --config files use) and validates every field
// against its documented domain before anything runs.
struct RunConfig {
  std::string subcommand;
  double beta = 0.5;
  double alpha = 0.8;
  std::string law = "rademacher";  // rademacher | pareto | stable
  double xmin = 1.0;               // pareto threshold
  double scale = 1.0;              // stable scale
  std::string family = "pure";     // pure | logperturbed (experimental)
  std::uint64_t n = 10000;
  std::vector<double> times{1.0};
  std::string delta = "1";  // parity bitstring, leftmost char = first time
  std::uint64_t kmax = 100;
  double x = 1.0;
  std::uint64_t reps = 1;
  std::uint64_t terms = 10000;  // series truncation J
  std::uint64_t kcut = 0;       // 0 = automatic head/tail split
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int precision = 7;
  std::string grid;               // "start:step:stop" probe grid
  std::vector<double> direction;  // probe direction, empty = all ones
  double sigma = 0.0;             // 0 = derive from (alpha, unit tail constant)
  std::vector<std::string> points;  // field points, each "t1,t2,...@bits"
  bool quick = false;
  std::string out;
  std::string format = "csv";  // csv | json

  bool operator==(const RunConfig&) const = default;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);

  // Overwrites fields named in j, skipping keys the command line already set;
  // unknown keys are rejected.
  void merge_json(const nlohmann::json& j, const std::vector<std::string>& cli_set_keys);

  // Throws std::invalid_argument naming the violated domain.
  void validate() const;
};

// "start:step:stop", inclusive of both ends (stop within 1e-9 of a step).
std::vector<double> parse_grid(const std::string& text);

// Parity bitstring -> bitmask; char j addresses checkpoint j.
std::uint32_t parse_pattern(const std::string& bits, std::size_t d);

// Executes the subcommand: writes artifacts atomically, prints human-readable
// results to `echo`. Returns the process exit status (0 ok, 3 = failed
// verification gate). Respects KARLIN_THREADS and KARLIN_OUT_DIR.
int run(const RunConfig& cfg, std::ostream& echo);

}  // namespace karlin
