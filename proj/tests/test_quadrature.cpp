#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "noma/quadrature.hpp"

using namespace noma;

TEST_CASE("smooth integrands") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 30.0, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kinked integrand still converges") {
    const double got =
        integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-10);
    CHECK(got == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-9));
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(integrate([](double) { return 0.0; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate([](double) { return 0.0; }, 1.0, 0.0, 1e-8),
                    std::invalid_argument);
}
