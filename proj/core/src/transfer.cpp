#include "noma/transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace noma {

GammaVector::GammaVector(RVector g) : gammas(std::move(g)) {
    if (gammas.size() < 1) {
        throw std::invalid_argument("gamma: empty");
    }
    for (Eigen::Index i = 0; i < gammas.size(); ++i) {
        if (!(gammas[i] > 0.0) || !std::isfinite(gammas[i])) {
            throw std::invalid_argument("gamma[" + std::to_string(i + 1) +
                                        "]: must be positive and finite");
        }
    }
}

RVector variance_from_anchor(double v1, const GammaVector& g) {
    if (!(v1 > 0.0) || v1 > 1.0) {
        throw std::invalid_argument("variance_from_anchor: v1 must lie in (0, 1]");
    }
    const double excess = 1.0 / v1 - 1.0;
    RVector v(g.size());
    v[0] = v1;
    for (int i = 1; i < g.size(); ++i) {
        v[i] = 1.0 / (1.0 + (g.gammas[0] / g.gammas[i]) * excess);
    }
    return v;
}

RVector phi(const SystemModel& system, const RVector& v) {
    const int nu = system.num_users();
    if (v.size() != nu) {
        throw std::invalid_argument("phi: variance vector length mismatch");
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || v[i] > 1.0) {
            throw std::invalid_argument("phi: variances must lie in (0, 1]");
        }
    }
    const Matrix& hp = system.effective_channel();
    Matrix precision = hp.adjoint() * hp / system.noise_variance();
    precision += Matrix(v.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>());
    Eigen::LLT<Matrix> llt((precision + precision.adjoint().eval()) / 2.0);
    const Matrix cov = llt.solve(Matrix::Identity(nu, nu));
    RVector rho(nu);
    for (int i = 0; i < nu; ++i) {
        rho[i] = 1.0 / cov(i, i).real() - 1.0 / v[i];
    }
    return rho;
}

double phi_scalar(const SystemModel& system, int user, double v1, const GammaVector& g) {
    if (user < 0 || user >= system.num_users()) {
        throw std::invalid_argument("phi_scalar: user index out of range");
    }
    if (v1 == 0.0) {
        // analytic limit: interference-free matched-filter bound
        return system.column_energy(user) / system.noise_variance();
    }
    return phi(system, variance_from_anchor(v1, g))[user];
}

double phi_inverse(const SystemModel& system, int user, double rho, const GammaVector& g) {
    const double tol = 1e-10 * (1.0 + rho);
    const double at_one = phi_scalar(system, user, 1.0, g);
    const double at_zero = phi_scalar(system, user, 0.0, g);
    if (rho < at_one - tol || rho >= at_zero) {
        throw std::range_error("phi_inverse: rho outside [phi_i(1), phi_i(0))");
    }
    if (rho <= at_one) {
        return 1.0;
    }
    // phi_scalar is monotone non-increasing in v1, so bisection is certified
    double lo = 0.0, hi = 1.0;  // phi(lo) = at_zero >= rho >= phi(hi) = at_one
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double val = phi_scalar(system, user, mid, g);
        if (std::abs(val - rho) <= tol) {
            return mid;
        }
        if (val > rho) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // interval is below double resolution; the midpoint is the certified root
    if (hi - lo < 1e-15 * (1.0 + hi)) {
        return 0.5 * (lo + hi);
    }
    throw std::runtime_error("phi_inverse: bisection did not converge in 200 iterations");
}

std::vector<std::pair<double, double>> TransferFunction::tabulate(int points) const {
    std::vector<std::pair<double, double>> table;
    table.reserve(static_cast<size_t>(points) + 1);
    table.emplace_back(domain_lo, eval(domain_lo));
    const double lo = std::max(domain_lo, domain_hi * 1e-4);
    const double ratio = domain_hi / lo;
    for (int k = 0; k < points; ++k) {
        const double x = lo * std::pow(ratio, static_cast<double>(k) / (points - 1));
        table.emplace_back(x, eval(x));
    }
    return table;
}

TransferFunction matched_psi(const SystemModel& system, int user, const GammaVector& g) {
    const double rho_lo = phi_scalar(system, user, 1.0, g);
    const double rho_hi = phi_scalar(system, user, 0.0, g);
    TransferFunction psi;
    psi.kind = TransferFunction::Kind::DecoderPsi;
    psi.domain_lo = 0.0;
    psi.domain_hi = 2.0 * rho_hi;
    psi.break_lo = rho_lo;
    psi.break_hi = rho_hi;
    psi.eval = [sys = system, user, g, rho_lo, rho_hi](double rho) -> double {
        if (rho < 0.0) {
            throw std::invalid_argument("psi: rho must be non-negative");
        }
        if (rho < rho_lo) {
            return 1.0;
        }
        if (rho >= rho_hi) {
            return 0.0;
        }
        const double v1 = phi_inverse(sys, user, rho, g);
        return variance_from_anchor(v1, g)[user];
    };
    return psi;
}

RegularityReport check_regularity(const TransferFunction& psi, int grid) {
    if (grid < 3) {
        throw std::invalid_argument("check_regularity: grid too small");
    }
    RegularityReport report;
    report.unit_at_zero = std::abs(psi(0.0) - 1.0) <= 1e-9;

    const double hi = std::max(psi.domain_hi, psi.break_hi);
    report.monotone = true;
    int jumps = 0;
    double prev = psi(0.0);
    double prev_x = 0.0;
    for (int k = 1; k < grid; ++k) {
        const double x = hi * static_cast<double>(k) / (grid - 1);
        const double val = psi(x);
        if (val > prev + 1e-9) {
            report.monotone = false;
        }
        // A steep but continuous drop interpolates through the midpoint; a
        // genuine jump does not.
        if (std::abs(val - prev) > 0.05) {
            const double mid = psi(0.5 * (prev_x + x));
            if (std::abs(mid - 0.5 * (prev + val)) > 0.25 * std::abs(val - prev)) {
                ++jumps;
            }
        }
        prev = val;
        prev_x = x;
    }
    report.few_breakpoints = jumps <= 2;

    report.vanishing_tail = true;
    for (double scale : {1.0, 2.0, 10.0}) {
        const double x = std::max(psi.break_hi, hi) * scale + 1.0;
        if (x * psi(x) > 1e-9) {
            report.vanishing_tail = false;
        }
    }
    return report;
}

}  // namespace noma
