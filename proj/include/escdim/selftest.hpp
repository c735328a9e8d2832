#pragma once

// Condensed invariant batteries for every module, runnable from the CLI
// (`selftest`) and reused by the unit tests. Each suite re-derives a handful
// of core identities from scratch with fixed seeds; a failure message carries
// the violated quantity and the bound it broke.

#include <ostream>
#include <string>
#include <vector>

namespace escdim {

struct SelftestOptions {
    std::string suite;  // empty = every suite
    double c1 = 0.5;    // branch-derivative constant fed to the covering suite
};

struct SuiteResult {
    std::string name;
    int checks = 0;
    std::vector<std::string> failures;
    double seconds = 0.0;
};

// Runs the selected suites in catalog order (sphere, elliptic, models,
// counting, covering, mcmullen, orbits, cli). An unknown suite name throws
// std::invalid_argument("unknown suite: <name>").
std::vector<SuiteResult> run_selftests(const SelftestOptions& opt);

// Prints one line per suite with its timing, then every failure. Returns 0
// when all checks pass, 1 on any failure, 2 for an unknown suite name.
int cmd_selftest(const SelftestOptions& opt, std::ostream& log);

}  // namespace escdim
