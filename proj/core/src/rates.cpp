#include "noma/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "noma/quadrature.hpp"

namespace noma {

EigenRateDecomposition rate_decomposition(const SystemModel& system, const GammaVector& g) {
    const int nu = system.num_users();
    if (g.size() != nu) {
        throw std::invalid_argument("rate_decomposition: gamma length mismatch");
    }
    const RVector sqrt_g = g.gammas.cwiseSqrt();
    Matrix a = sqrt_g.cast<Complex>().asDiagonal() * gram(system) *
               sqrt_g.cast<Complex>().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint().eval()) / 2.0);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("rate_decomposition: eigendecomposition failed");
    }
    EigenRateDecomposition out;
    out.eigenvalues = es.eigenvalues();
    // every eigenvalue is >= min(gamma) since the Gram factor dominates the
    // identity; anything below that is eigensolver round-off on extreme gamma
    // spans and would poison the logarithm
    out.eigenvalues = out.eigenvalues.cwiseMax(g.gammas.minCoeff());
    out.weights = es.eigenvectors().cwiseAbs2();
    return out;
}

RatePoint rates_closed_form(const SystemModel& system, const GammaVector& g) {
    const EigenRateDecomposition dec = rate_decomposition(system, g);
    const RVector log_lambda = dec.eigenvalues.array().log();
    RVector rates = dec.weights * log_lambda - g.gammas.array().log().matrix();
    return RatePoint::from_rates(std::move(rates));
}

double rate_quadrature(const SystemModel& system, int user, const GammaVector& g, double tol) {
    const int nu = system.num_users();
    if (user < 0 || user >= nu) {
        throw std::invalid_argument("rate_quadrature: user index out of range");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("rate_quadrature: tolerance must be positive");
    }
    const RVector sqrt_g = g.gammas.cwiseSqrt();
    const Matrix a = sqrt_g.cast<Complex>().asDiagonal() * gram(system) *
                     sqrt_g.cast<Complex>().asDiagonal();
    const double a_ii = a(user, user).real();
    CVector e_i = CVector::Zero(nu);
    e_i[user] = Complex(1, 0);

    // t = u/(1-u) maps [0,1) to [0,inf); the transformed integrand is bounded
    // with limit a_ii - 1 at u = 1.
    auto integrand = [&](double u) -> double {
        if (u >= 1.0 - 1e-14) {
            return a_ii - 1.0;
        }
        const double t = u / (1.0 - u);
        Matrix shifted = a;
        shifted.diagonal().array() += t;
        Eigen::LLT<Matrix> llt(shifted);
        const double resolvent_ii = llt.solve(e_i)[user].real();
        const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
        return (1.0 / (1.0 + t) - resolvent_ii) * jac;
    };
    return integrate(integrand, 0.0, 1.0, tol) - std::log(g.gammas[user]);
}

double rate_from_psi(const TransferFunction& psi, double tol) {
    auto integrand = [&psi](double rho) -> double {
        const double p = psi(rho);
        if (p <= 0.0) {
            return 0.0;
        }
        return 1.0 / (rho + 1.0 / p);
    };
    const double hi = std::max(psi.domain_hi, psi.break_hi);
    double total = 0.0;
    double a = 0.0;
    for (double brk : {psi.break_lo, psi.break_hi, hi}) {
        if (brk > a) {
            total += integrate(integrand, a, brk, tol / 3.0);
            a = brk;
        }
    }
    return total;
}

double rate_from_decoder_transfer(const SystemModel& system, int user, const GammaVector& g,
                                  double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("rate_from_decoder_transfer: tolerance must be positive");
    }
    const TransferFunction psi = matched_psi(system, user, g);
    // psi = 1 below the first breakpoint: that piece is exactly log(1 + rho).
    double total = std::log1p(psi.break_lo);
    if (psi.break_hi > psi.break_lo) {
        auto integrand = [&psi](double rho) {
            const double p = psi(rho);
            return p <= 0.0 ? 0.0 : 1.0 / (rho + 1.0 / p);
        };
        total += integrate(integrand, psi.break_lo, psi.break_hi, tol);
    }
    return total;
}

RatePoint two_user_closed_form(const SystemModel& system, double gamma2,
                               bool use_printed_r2_form) {
    if (system.num_users() != 2) {
        throw std::invalid_argument("two_user_closed_form: requires exactly 2 users");
    }
    if (!(gamma2 > 0.0)) {
        throw std::invalid_argument("two_user_closed_form: gamma2 must be positive");
    }
    const Matrix a = gram(system);
    const double a11 = a(0, 0).real();
    const double a22 = a(1, 1).real();
    const double cross = (a(0, 1) * a(1, 0)).real();  // |a12|^2 for Hermitian A
    const double det_a = a11 * a22 - cross;
    const double gamma = gamma2;

    const double eta =
        std::sqrt(a22 * a22 * gamma * gamma + 2.0 * (2.0 * cross - a22 * a11) * gamma + a11 * a11);
    const double p = a22 * gamma + a11;
    double ratio_term = 0.0;
    if (eta > 1e-14) {
        ratio_term = (a22 * gamma - a11) / (2.0 * eta) * std::log((p - eta) / (p + eta));
    }
    const double r1 = 0.5 * std::log(gamma * det_a) + ratio_term;
    const double c_sum = std::log(det_a);
    double r2;
    if (use_printed_r2_form) {
        // sign-corrected log-ratio (the verbatim published ratio cancels to 1)
        r2 = 0.5 * std::log(det_a / gamma) - ratio_term;
    } else {
        r2 = c_sum - r1;
    }
    RVector rates(2);
    rates << r1, r2;
    return RatePoint::from_rates(std::move(rates));
}

RatePoint sic_extreme_limit(const SystemModel& system, const UserPermutation& perm,
                            double ladder) {
    const int nu = system.num_users();
    validate_permutation(perm, nu);
    if (!(ladder >= 10.0)) {
        throw std::invalid_argument("sic_extreme_limit: ladder must be >= 10");
    }
    const double log_ladder = std::log(ladder);
    // center the exponents when the raw ladder would overflow the rescale
    // budget; rates are invariant under a common gamma scale
    const bool center = (static_cast<double>(nu - 1) * log_ladder > std::log(1e12));
    const double shift = center ? 0.5 * static_cast<double>(nu - 1) : 0.0;
    RVector g(nu);
    for (int i = 0; i < nu; ++i) {
        g[perm[i]] = std::exp((static_cast<double>(i) - shift) * log_ladder);
    }
    return rates_closed_form(system, GammaVector(std::move(g)));
}

SymmetricRate symmetric_rate(const SystemModel& system) {
    SymmetricRate out;
    out.per_user = sum_capacity(system) / system.num_users();
    out.at_unit_gamma = rates_closed_form(system, GammaVector::ones(system.num_users())).rates;
    out.spread = (out.at_unit_gamma.array() - out.per_user).abs().maxCoeff();
    return out;
}

}  // namespace noma
