#pragma once

#include <vector>

#include "noma/system_model.hpp"

namespace noma {

/// Per-user rates in nats per channel use.
struct RatePoint {
    RVector rates;
    double sum = 0.0;

    static RatePoint from_rates(RVector r) {
        RatePoint p;
        p.sum = r.sum();
        p.rates = std::move(r);
        return p;
    }
};

/// Decoding order k_1, ..., k_Nu as 0-based user indices.
using UserPermutation = std::vector<int>;

void validate_permutation(const UserPermutation& perm, int num_users);

/// log det(I + H'_S^H H'_S / sigma^2) for a non-empty user subset (0-based).
double subset_rate_bound(const SystemModel& system, const std::vector<int>& subset);

double sum_capacity(const SystemModel& system);

/// Maximal extreme (SIC) point for a decoding order. User perm[0] is decoded
/// first (sees all later users as interference); user perm[Nu-1] gets the
/// interference-free single-user rate.
RatePoint extreme_point(const SystemModel& system, const UserPermutation& perm);

struct MembershipResult {
    bool contained = false;
    /// Violated subsets (0-based user indices), empty when contained.
    std::vector<std::vector<int>> violated;
};

/// Exhaustive check of all 2^Nu - 1 subset constraints. Nu <= 20.
MembershipResult region_contains(const SystemModel& system, const RatePoint& point, double slack);

}  // namespace noma
