#include <doctest.h>

#include "noma/lmmse.hpp"
#include "test_systems.hpp"

using namespace noma;

TEST_CASE("constellations have unit average power") {
    for (const Constellation& c : {Constellation::bpsk(), Constellation::qpsk()}) {
        double p = 0.0;
        for (const Complex& s : c.points) {
            p += std::norm(s);
        }
        CHECK(p / static_cast<double>(c.points.size()) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(Constellation({Complex(2, 0), Complex(-2, 0)}), std::invalid_argument);
}

TEST_CASE("prior moments of a biased binary likelihood") {
    const GaussianBelief b = prior_moments({{0.75, 0.25}}, Constellation::bpsk());
    CHECK(b.mean.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(b.mean.imag() == doctest::Approx(0.0));
    CHECK(b.variance == doctest::Approx(0.75).epsilon(1e-12));

    const GaussianBelief point = prior_moments({{1.0, 0.0}}, Constellation::bpsk());
    CHECK(point.mean.real() == doctest::Approx(1.0));
    CHECK(point.variance == doctest::Approx(0.0));
}

TEST_CASE("frozen estimate on the 2x2 system") {
    const SystemModel sys = noma_test::fig6();
    CVector y(2);
    y << Complex(1, 0), Complex(1, 0);
    const LmmseResult r =
        lmmse_estimate(sys, y, CVector::Zero(2), RVector::Ones(2), /*check_alternate_form=*/true);
    CHECK(r.xhat[0].real() == doctest::Approx(-0.464017286671).epsilon(1e-10));
    CHECK(r.xhat[1].real() == doctest::Approx(-0.674241699485).epsilon(1e-10));
    CHECK(r.xhat[0].imag() == doctest::Approx(0.0));
    CHECK(r.cov(0, 0).real() == doctest::Approx(0.338754130776).epsilon(1e-10));
    CHECK(r.cov(1, 1).real() == doctest::Approx(0.525505874327).epsilon(1e-10));
}

TEST_CASE("both estimator forms agree on random inputs") {
    std::mt19937_64 rng = substream(31, 0);
    for (int k = 0; k < 20; ++k) {
        const SystemModel sys = noma_test::random_system(rng, 2 + k % 4, 2 + k % 3, 0.5);
        CVector y(sys.num_rx()), xbar(sys.num_users());
        RVector v(sys.num_users());
        std::uniform_real_distribution<double> uv(0.05, 1.0);
        for (int i = 0; i < sys.num_rx(); ++i) y[i] = standard_complex_gaussian(rng);
        for (int i = 0; i < sys.num_users(); ++i) {
            xbar[i] = standard_complex_gaussian(rng);
            v[i] = uv(rng);
        }
        CHECK_NOTHROW(lmmse_estimate(sys, y, xbar, v, /*check_alternate_form=*/true));
    }
}

TEST_CASE("tiny variances are floored rather than inverted") {
    const SystemModel sys = noma_test::fig6();
    CVector y(2);
    y << Complex(1, 0), Complex(-1, 0);
    RVector v(2);
    v << 1.0, 0.0;
    const LmmseResult r = lmmse_estimate(sys, y, CVector::Zero(2), v);
    CHECK(std::abs(r.xhat[1]) < 1e-6);  // a zero-variance prior pins the symbol
    CHECK(r.cov(1, 1).real() < 1e-6);
}

TEST_CASE("extrinsic combine inverts the Gaussian product") {
    const GaussianBelief prior{Complex(0.3, -0.2), 0.6};
    const GaussianBelief extrinsic{Complex(-0.5, 0.1), 1.4};
    const double v_post = 1.0 / (1.0 / prior.variance + 1.0 / extrinsic.variance);
    const GaussianBelief posterior{
        v_post * (prior.mean / prior.variance + extrinsic.mean / extrinsic.variance), v_post};
    const GaussianBelief back = extrinsic_combine(posterior, prior);
    CHECK(std::abs(back.mean - extrinsic.mean) < 1e-10);
    CHECK(back.variance == doctest::Approx(extrinsic.variance).epsilon(1e-10));
}

TEST_CASE("extrinsic frozen example") {
    const GaussianBelief back =
        extrinsic_combine(GaussianBelief{Complex(0.5, 0), 0.5}, GaussianBelief{Complex(0, 0), 1.0});
    CHECK(back.mean.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(back.variance == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("extrinsic combine rejects non-informative posteriors") {
    CHECK_THROWS_AS(extrinsic_combine(GaussianBelief{Complex(0, 0), 1.0},
                                      GaussianBelief{Complex(0, 0), 1.0}),
                    std::invalid_argument);
}

TEST_CASE("monte carlo validation is thread-count independent") {
    const SystemModel sys = noma_test::fig6();
    const RVector v = RVector::Constant(2, 0.5);
    const EseValidation a = validate_awgn_model(sys, v, 20000, 99, 1);
    const EseValidation b = validate_awgn_model(sys, v, 20000, 99, 4);
    CHECK(a.empirical_snr[0] == b.empirical_snr[0]);
    CHECK(a.empirical_snr[1] == b.empirical_snr[1]);
    CHECK(a.error_signal_corr[0] == b.error_signal_corr[0]);
    CHECK(a.error_signal_corr[1] == b.error_signal_corr[1]);
}
