#pragma once
#include <string>
#include <vector>

namespace gengeo {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;      // measured values, one line
    double seconds = 0.0;
    double budget_seconds = 0.0;  // run time is part of the criterion
};

// Runs the full acceptance suite in order. Each criterion is independent;
// a throw inside one is recorded as its failure, not the suite's.
std::vector<CriterionResult> run_acceptance_suite();

} // namespace gengeo
