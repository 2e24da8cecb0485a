#pragma once

#include <string>
#include <vector>

namespace nslab {

struct CheckLine {
    int criterion = 0;
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=" or ">="
    bool informational = false;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckLine> lines;

    bool passed() const;
};

// Invariant suites: front-coincidence, normality, form-equivalence,
// first-integral, h-zero, legendre, transport, gradients, order.
const std::vector<std::string>& suite_names();

// Runs one suite by name, or every suite for "all". Unknown names throw a
// config error.
std::vector<SuiteResult> run_suites(const std::string& name);

struct SimConfig;

// Runs a configured simulation and checks the invariants its form promises:
// phase spread for the modified flow, normality for modified and Newtonian
// flows, and drift of the monitored first integral.
SuiteResult check_config(const SimConfig& cfg);

std::string format_line(const CheckLine& line);

} // namespace nslab
