#pragma once

// Named verification suites aggregating the module invariants into
// reproducible pass/fail reports.

#include <string>
#include <vector>

#include "subspec/report.hpp"

namespace subspec {

struct SuiteConfig {
    std::string flow = "affine";
    double p = 2.0;
    double t = 1.0;
    int N = 0;            // 0 = per-suite default
    std::string out_dir;  // empty = no artifact files written
};

// Suite names accepted by the command-line `verify` command.
const std::vector<std::string>& registered_suites();
bool is_registered_suite(const std::string& name);

// Runs a suite by name. Beyond the registered list, the name
// "region-coherence" is accepted here for the acceptance gate.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace subspec
