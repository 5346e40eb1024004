#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace noma {

struct CriterionResult {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string name;
    std::function<CriterionResult()> run;
};

/// Self-verification suite. Tolerances are pinned in code; an individual
/// criterion tolerance can be overridden for diagnostics via the environment
/// variable NOMA_ACCEPT_TOL_<id>.
const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion (or just lists them), one line each.
/// Returns the number of failed criteria.
int run_acceptance(std::ostream& out, bool list_only = false);

}  // namespace noma
