// Full-budget statistical acceptance run: prints one line per gate and exits
// nonzero if any gate fails.
#include <cstdio>

#include "karlin/verify.hpp"

int main() {
  karlin::SuiteOptions opts;
  opts.seed = 42;
  opts.exec = karlin::Exec::Parallel;
  opts.quick = false;
  karlin::SuiteResult res = karlin::run_acceptance_suite(opts);

  int failed = 0;
  for (const auto& rep : res.reports) {
    bool ok = rep.pass();
    failed += ok ? 0 : 1;
    std::printf("[%s] %-22s (%.1fs)\n", ok ? "PASS" : "FAIL", rep.name.c_str(),
                rep.runtime_seconds);
    for (const auto& chk : rep.checks) {
      std::printf("  %s %-38s observed=%.12g target=%.12g tol=%.12g%s%s\n",
                  chk.pass ? "ok  " : "FAIL", chk.name.c_str(), chk.observed, chk.target,
                  chk.tolerance, chk.detail.empty() ? "" : "  ", chk.detail.c_str());
    }
  }
  std::printf("%zu/%zu gates passed\n", res.reports.size() - static_cast<std::size_t>(failed),
              res.reports.size());
  return failed == 0 ? 0 : 1;
}
