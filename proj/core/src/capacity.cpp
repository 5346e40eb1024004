#include "noma/capacity.hpp"

#include <algorithm>
#include <stdexcept>

namespace noma {

void validate_permutation(const UserPermutation& perm, int num_users) {
    if (static_cast<int>(perm.size()) != num_users) {
        throw std::invalid_argument("permutation: wrong length");
    }
    std::vector<bool> seen(num_users, false);
    for (int k : perm) {
        if (k < 0 || k >= num_users || seen[k]) {
            throw std::invalid_argument("permutation: not a valid permutation of the users");
        }
        seen[k] = true;
    }
}

double subset_rate_bound(const SystemModel& system, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw std::invalid_argument("subset_rate_bound: empty subset");
    }
    const Matrix& hp = system.effective_channel();
    Matrix cols(hp.rows(), static_cast<Eigen::Index>(subset.size()));
    for (size_t j = 0; j < subset.size(); ++j) {
        if (subset[j] < 0 || subset[j] >= system.num_users()) {
            throw std::invalid_argument("subset_rate_bound: user index out of range");
        }
        cols.col(static_cast<Eigen::Index>(j)) = hp.col(subset[j]);
    }
    Matrix b = cols.adjoint() * cols / system.noise_variance();
    b.diagonal().array() += 1.0;
    return log_det_hermitian((b + b.adjoint().eval()) / 2.0);
}

double sum_capacity(const SystemModel& system) {
    return log_det_hermitian(gram(system));
}

RatePoint extreme_point(const SystemModel& system, const UserPermutation& perm) {
    const int n = system.num_users();
    validate_permutation(perm, n);
    // bound(S_j^c) for S_j = {k_1..k_j}: rate of user k_j is the telescoping
    // difference bound(S_{j-1}^c) - bound(S_j^c), with bound(S_0^c) = C_sum.
    RVector rates = RVector::Zero(n);
    std::vector<int> remaining(perm.begin(), perm.end());
    double prev = sum_capacity(system);
    for (int j = 0; j < n; ++j) {
        remaining.erase(remaining.begin());  // drop k_j; remaining = S_j^c
        const double next = remaining.empty() ? 0.0 : subset_rate_bound(system, remaining);
        rates[perm[j]] = prev - next;
        prev = next;
    }
    return RatePoint::from_rates(std::move(rates));
}

MembershipResult region_contains(const SystemModel& system, const RatePoint& point, double slack) {
    const int n = system.num_users();
    if (n > 20) {
        throw std::invalid_argument("region_contains: subset enumeration not supported above 20 users");
    }
    if (point.rates.size() != n) {
        throw std::invalid_argument("region_contains: rate tuple length mismatch");
    }
    MembershipResult result;
    result.contained = true;
    for (int i = 0; i < n; ++i) {
        if (point.rates[i] < -slack) {
            result.contained = false;
            result.violated.push_back({i});
        }
    }
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        double rate_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                subset.push_back(i);
                rate_sum += point.rates[i];
            }
        }
        if (rate_sum > subset_rate_bound(system, subset) + slack) {
            result.contained = false;
            result.violated.push_back(std::move(subset));
        }
    }
    return result;
}

}  // namespace noma
