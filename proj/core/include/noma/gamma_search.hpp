#pragma once

#include <utility>
#include <vector>

#include "noma/rates.hpp"

namespace noma {

struct SearchConfig {
    double epsilon = 1e-4;            // L1 rate tolerance, nats
    int max_outer_iters = 100;
    double inner_bisection_tol = 1e-10;
    double gamma_lo = 1e-8;
    double gamma_hi = 1e8;
};

enum class SearchStatus {
    Converged,            // target hit exactly (it lay on the sum-capacity face)
    ConvergedProjected,   // interior target matched after projection to the face
    Infeasible,           // target outside the capacity region
    MaxIterations,        // best effort after the outer-iteration budget
};

struct SearchResult {
    SearchStatus status = SearchStatus::MaxIterations;
    RVector gamma;
    RatePoint achieved;
    double l1_error = 0.0;                         // against the (projected) target
    int iterations = 0;
    std::vector<std::pair<int, double>> trace;     // (outer iteration, L1 error)
    std::vector<std::vector<int>> violated;        // subsets, when infeasible
    RatePoint effective_target;                    // target after any projection
    bool projected = false;
};

/// Coordinate search for gamma achieving the target rates: per-user bisection
/// in log gamma_i (monotone per-user rate map), with a halving retreat
/// whenever a step worsens the L1 error. Targets strictly inside the region
/// are projected proportionally onto the sum-capacity face first, since the
/// forward map's range is that face.
SearchResult search_gamma(const SystemModel& system, const RatePoint& target,
                          const SearchConfig& cfg);

}  // namespace noma
