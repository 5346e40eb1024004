#include <doctest.h>

#include "noma/gamma_search.hpp"
#include "test_systems.hpp"

using namespace noma;

TEST_CASE("forward-map targets are recovered") {
    std::mt19937_64 rng = substream(51, 0);
    SearchConfig cfg;
    for (int k = 0; k < 6; ++k) {
        const int nu = 2 + k % 2;
        const SystemModel sys = noma_test::random_system(rng, nu, nu, 0.5);
        const GammaVector g0(noma_test::random_gamma(rng, nu, 1e-2, 1e2));
        const RatePoint target = rates_closed_form(sys, g0);
        const SearchResult res = search_gamma(sys, target, cfg);
        CHECK(res.status == SearchStatus::Converged);
        CHECK(res.l1_error <= cfg.epsilon);
        CHECK(res.iterations <= cfg.max_outer_iters);
        // achieved gamma reproduces the achieved rates
        const RatePoint check = rates_closed_form(sys, GammaVector(res.gamma));
        CHECK((check.rates - res.achieved.rates).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("infeasible targets name a violated subset") {
    const SystemModel sys = noma_test::fig6();
    RVector bad(2);
    bad << noma_test::kSingleUser1Fig6 * 1.05, 0.1;
    const SearchResult res = search_gamma(sys, RatePoint::from_rates(bad), SearchConfig{});
    CHECK(res.status == SearchStatus::Infeasible);
    REQUIRE_FALSE(res.violated.empty());
    CHECK(res.violated.front() == std::vector<int>{0});
}

TEST_CASE("interior targets are projected to the sum-capacity face") {
    const SystemModel sys = noma_test::fig6();
    RVector inside(2);
    inside << 0.8, 0.4;
    const SearchResult res = search_gamma(sys, RatePoint::from_rates(inside), SearchConfig{});
    CHECK(res.status == SearchStatus::ConvergedProjected);
    CHECK(res.projected);
    CHECK(res.effective_target.sum ==
          doctest::Approx(noma_test::kCsumFig6).epsilon(1e-9));
    // projection preserves the target's rate proportions
    CHECK(res.effective_target.rates[0] / res.effective_target.rates[1] ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(res.l1_error <= SearchConfig{}.epsilon);
}

TEST_CASE("search is deterministic and its trace is non-increasing") {
    const SystemModel sys = noma_test::fig8();
    RVector g0(3);
    g0 << 1.0, 3.0, 0.4;
    const RatePoint target = rates_closed_form(sys, GammaVector(g0));
    const SearchResult a = search_gamma(sys, target, SearchConfig{});
    const SearchResult b = search_gamma(sys, target, SearchConfig{});
    CHECK(a.gamma == b.gamma);
    CHECK(a.l1_error == b.l1_error);
    REQUIRE(!a.trace.empty());
    for (size_t k = 1; k < a.trace.size(); ++k) {
        CHECK(a.trace[k].second <= a.trace[k - 1].second + 1e-12);
    }
}

TEST_CASE("invalid inputs are rejected") {
    const SystemModel sys = noma_test::fig6();
    SearchConfig bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(search_gamma(sys, RatePoint::from_rates(RVector::Ones(2)), bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        search_gamma(sys, RatePoint::from_rates(RVector::Ones(3)), SearchConfig{}),
        std::invalid_argument);
}
