#include <doctest.h>

#include "noma/transfer.hpp"
#include "test_systems.hpp"

using namespace noma;

TEST_CASE("gamma vector validation and gauge helpers") {
    RVector bad(2);
    bad << 1.0, -2.0;
    CHECK_THROWS_AS((void)GammaVector(bad), std::invalid_argument);
    CHECK_THROWS_AS((void)GammaVector(RVector(0)), std::invalid_argument);

    RVector raw(3);
    raw << 2.0, 4.0, 1.0;
    const GammaVector g(raw);
    CHECK_FALSE(g.anchored());
    const GammaVector n = g.normalized();
    CHECK(n.anchored());
    CHECK(n.gammas[1] == doctest::Approx(2.0));
    CHECK(n.gammas[2] == doctest::Approx(0.5));
}

TEST_CASE("variance from anchor respects the coupling constraint") {
    RVector raw(3);
    raw << 1.0, 2.0, 0.25;
    const GammaVector g(raw);
    const RVector v = variance_from_anchor(0.4, g);
    CHECK(v[0] == doctest::Approx(0.4));
    const double excess = 1.0 / 0.4 - 1.0;
    for (int i = 1; i < 3; ++i) {
        CHECK(1.0 / v[i] - 1.0 == doctest::Approx(excess / raw[i]).epsilon(1e-12));
    }
    CHECK(variance_from_anchor(1.0, g).maxCoeff() == doctest::Approx(1.0));
    CHECK_THROWS_AS(variance_from_anchor(0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(variance_from_anchor(1.5, g), std::invalid_argument);
}

TEST_CASE("frozen phi values on the 2x2 system") {
    const SystemModel sys = noma_test::fig6();
    const RVector p1 = phi(sys, RVector::Ones(2));
    CHECK(p1[0] == doctest::Approx(1.951993523175).epsilon(1e-10));
    CHECK(p1[1] == doctest::Approx(0.902928299862).epsilon(1e-10));
    const RVector p2 = phi(sys, RVector::Constant(2, 0.25));
    CHECK(p2[0] == doctest::Approx(3.930066491545).epsilon(1e-10));
    CHECK(p2[1] == doctest::Approx(1.842348677276).epsilon(1e-10));
}

TEST_CASE("phi approaches the matched-filter bound as v -> 0") {
    const SystemModel sys = noma_test::fig6();
    const GammaVector g = GammaVector::ones(2);
    CHECK(phi_scalar(sys, 0, 0.0, g) == doctest::Approx(7.5746).epsilon(1e-12));
    CHECK(phi_scalar(sys, 1, 0.0, g) == doctest::Approx(4.5274).epsilon(1e-12));
    CHECK(phi_scalar(sys, 0, 1e-9, g) == doctest::Approx(7.5746).epsilon(1e-6));
}

TEST_CASE("phi is monotone decreasing along the anchor") {
    const SystemModel sys = noma_test::fig8();
    RVector raw(3);
    raw << 1.0, 3.0, 0.2;
    const GammaVector g(raw);
    for (int user = 0; user < 3; ++user) {
        double prev = phi_scalar(sys, user, 1.0, g);
        for (double v1 : {0.8, 0.5, 0.2, 0.05, 0.001}) {
            const double cur = phi_scalar(sys, user, v1, g);
            CHECK(cur > prev);
            prev = cur;
        }
        CHECK(phi_scalar(sys, user, 0.0, g) > prev);
    }
}

TEST_CASE("phi_inverse round trips across the invertible band") {
    const SystemModel sys = noma_test::fig6();
    RVector raw(2);
    raw << 1.0, 5.0;
    const GammaVector g(raw);
    for (int user = 0; user < 2; ++user) {
        for (double v1 : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
            const double rho = phi_scalar(sys, user, v1, g);
            CHECK(phi_inverse(sys, user, rho, g) == doctest::Approx(v1).epsilon(1e-8));
        }
        CHECK_THROWS_AS(
            phi_inverse(sys, user, phi_scalar(sys, user, 0.0, g) + 1.0, g), std::range_error);
        CHECK_THROWS_AS(
            phi_inverse(sys, user, 0.5 * phi_scalar(sys, user, 1.0, g), g), std::range_error);
    }
}

TEST_CASE("matched psi is piecewise with continuous breakpoints") {
    const SystemModel sys = noma_test::fig6();
    const GammaVector g = GammaVector::ones(2);
    for (int user = 0; user < 2; ++user) {
        const TransferFunction psi = matched_psi(sys, user, g);
        CHECK(psi(0.0) == 1.0);
        CHECK(psi(0.5 * psi.break_lo) == 1.0);
        // continuity at both kinks
        CHECK(psi(psi.break_lo * (1 + 1e-9)) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(psi(psi.break_hi * (1 - 1e-9)) == doctest::Approx(0.0).epsilon(1e-3));
        CHECK(psi(psi.break_hi) == 0.0);
        CHECK(psi(10 * psi.break_hi) == 0.0);
        // interior values satisfy phi(psi(rho)) = rho
        const double rho = 0.5 * (psi.break_lo + psi.break_hi);
        const double v1 = phi_inverse(sys, user, rho, g);
        CHECK(psi(rho) == doctest::Approx(variance_from_anchor(v1, g)[user]).epsilon(1e-9));
    }
}

TEST_CASE("matched psi passes the regularity checks") {
    const SystemModel sys = noma_test::fig8();
    RVector raw(3);
    raw << 1.0, 2.0, 0.5;
    const GammaVector g(raw);
    for (int user = 0; user < 3; ++user) {
        const RegularityReport rep = check_regularity(matched_psi(sys, user, g), 512);
        CHECK(rep.unit_at_zero);
        CHECK(rep.monotone);
        CHECK(rep.few_breakpoints);
        CHECK(rep.vanishing_tail);
        CHECK(rep.all());
    }
}

TEST_CASE("tabulate emits a monotone grid covering the domain") {
    const SystemModel sys = noma_test::fig6();
    const TransferFunction psi = matched_psi(sys, 0, GammaVector::ones(2));
    const auto table = psi.tabulate(64);
    CHECK(table.size() == 65);
    CHECK(table.front().first == psi.domain_lo);
    CHECK(table.back().first == doctest::Approx(psi.domain_hi));
    for (size_t k = 1; k < table.size(); ++k) {
        CHECK(table[k].first >= table[k - 1].first);
        CHECK(table[k].second <= table[k - 1].second + 1e-12);
    }
}
