#pragma once

#include "noma/rng.hpp"
#include "noma/system_model.hpp"

namespace noma_test {

inline noma::SystemModel fig6() {
    noma::Matrix h(2, 2);
    h << noma::Complex(1.32, 0), noma::Complex(-1.31, 0),  //
        noma::Complex(-1.43, 0), noma::Complex(0.74, 0);
    return noma::SystemModel(h, noma::RVector::Ones(2), 0.5);
}

inline noma::SystemModel fig8() {
    noma::Matrix h(2, 3);
    h << noma::Complex(0.678, 0), noma::Complex(0.603, 0), noma::Complex(0.655, 0),
        noma::Complex(0.557, 0), noma::Complex(0.392, 0), noma::Complex(0.171, 0);
    return noma::SystemModel(h, noma::RVector::Ones(3), 0.5);
}

inline noma::SystemModel random_system(std::mt19937_64& rng, int nr, int nu, double sigma2) {
    noma::Matrix h(nr, nu);
    for (int r = 0; r < nr; ++r) {
        for (int c = 0; c < nu; ++c) {
            h(r, c) = noma::standard_complex_gaussian(rng);
        }
    }
    return noma::SystemModel(std::move(h), noma::RVector::Ones(nu), sigma2);
}

inline noma::RVector random_gamma(std::mt19937_64& rng, int nu, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    noma::RVector g(nu);
    for (int i = 0; i < nu; ++i) {
        g[i] = std::exp(u(rng));
    }
    return g / g[0];
}

// reference values computed with an independent high-precision implementation
inline constexpr double kCsumFig6 = 2.7921982549140028;
inline constexpr double kCsumFig8 = 1.5795611548743522;
inline constexpr double kSingleUser1Fig6 = 2.148804344733667;
inline constexpr double kSingleUser2Fig6 = 1.7097175422244388;

}  // namespace noma_test
