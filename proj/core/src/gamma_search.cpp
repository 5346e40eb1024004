#include "noma/gamma_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noma {

namespace {

double l1_distance(const RVector& a, const RVector& b) {
    return (a - b).cwiseAbs().sum();
}

RVector rates_at(const SystemModel& system, const RVector& gamma) {
    return rates_closed_form(system, GammaVector(gamma)).rates;
}

/// Solve R_i(gamma_i) = target holding the other coordinates fixed.
/// R_i increases monotonically in gamma_i, so bisection in log gamma_i is
/// certified; out-of-range targets clamp to the nearest bound.
double bisect_coordinate(const SystemModel& system, RVector gamma, int i, double target,
                         const SearchConfig& cfg) {
    double lo = std::log(cfg.gamma_lo);
    double hi = std::log(cfg.gamma_hi);
    auto rate_i = [&](double log_g) {
        gamma[i] = std::exp(log_g);
        return rates_at(system, gamma)[i];
    };
    if (rate_i(lo) >= target) {
        return cfg.gamma_lo;
    }
    if (rate_i(hi) <= target) {
        return cfg.gamma_hi;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double r = rate_i(mid);
        if (std::abs(r - target) <= cfg.inner_bisection_tol * (1.0 + std::abs(target))) {
            return std::exp(mid);
        }
        if (r < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

SearchResult search_gamma(const SystemModel& system, const RatePoint& target,
                          const SearchConfig& cfg) {
    const int nu = system.num_users();
    if (target.rates.size() != nu) {
        throw std::invalid_argument("search_gamma: target length mismatch");
    }
    if (!(cfg.epsilon > 0.0) || cfg.max_outer_iters < 1) {
        throw std::invalid_argument("search_gamma: invalid search config");
    }
    if (!(cfg.gamma_lo > 0.0) || !(cfg.gamma_lo < 1.0) || !(cfg.gamma_hi > 1.0)) {
        throw std::invalid_argument("search_gamma: gamma bounds must satisfy lo < 1 < hi");
    }

    SearchResult result;
    const MembershipResult membership = region_contains(system, target, 1e-9);
    if (!membership.contained) {
        result.status = SearchStatus::Infeasible;
        result.violated = membership.violated;
        result.effective_target = target;
        return result;
    }

    // The forward map always lands on the sum-capacity face, so strictly
    // interior targets are matched after proportional projection onto it.
    const double c_sum = sum_capacity(system);
    RVector t = target.rates;
    const double t_sum = t.sum();
    if (t_sum < c_sum * (1.0 - 1e-9)) {
        result.projected = true;
        if (t_sum <= 0.0) {
            t = RVector::Constant(nu, c_sum / nu);
        } else {
            t *= c_sum / t_sum;
        }
    }
    result.effective_target = RatePoint::from_rates(t);

    RVector gamma = RVector::Ones(nu);
    RVector rates = rates_at(system, gamma);
    double l1 = l1_distance(rates, t);
    result.trace.emplace_back(0, l1);

    int outer = 0;
    while (l1 > cfg.epsilon && outer < cfg.max_outer_iters) {
        ++outer;
        for (int i = 0; i < nu; ++i) {
            double candidate = bisect_coordinate(system, gamma, i, t[i], cfg);
            RVector trial = gamma;
            trial[i] = candidate;
            RVector trial_rates = rates_at(system, trial);
            double trial_l1 = l1_distance(trial_rates, t);
            // retreat halfway toward the previous gamma_i while the step
            // worsens the L1 error
            for (int retreat = 0; retreat < 200 && trial_l1 > l1; ++retreat) {
                candidate = 0.5 * (gamma[i] + candidate);
                trial[i] = candidate;
                trial_rates = rates_at(system, trial);
                trial_l1 = l1_distance(trial_rates, t);
            }
            if (trial_l1 <= l1) {
                gamma = trial;
                rates = trial_rates;
                l1 = trial_l1;
            }
        }
        // re-anchor the gauge; rates are invariant under a common scale
        gamma /= gamma[0];
        for (int i = 0; i < nu; ++i) {
            gamma[i] = std::clamp(gamma[i], cfg.gamma_lo, cfg.gamma_hi);
        }
        rates = rates_at(system, gamma);
        l1 = l1_distance(rates, t);
        result.trace.emplace_back(outer, l1);
    }

    result.gamma = gamma;
    result.achieved = RatePoint::from_rates(rates);
    result.l1_error = l1;
    result.iterations = outer;
    if (l1 <= cfg.epsilon) {
        result.status =
            result.projected ? SearchStatus::ConvergedProjected : SearchStatus::Converged;
    } else {
        result.status = SearchStatus::MaxIterations;
    }
    return result;
}

}  // namespace noma
