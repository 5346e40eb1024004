#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "noma/system_model.hpp"

namespace noma {

/// Per-user variance-coupling parameters. Constraints are expressed through
/// the ratios gamma_1/gamma_i, so any positive vector is accepted; anchored()
/// reports whether the gamma_1 = 1 gauge holds exactly.
struct GammaVector {
    RVector gammas;

    explicit GammaVector(RVector g);
    static GammaVector ones(int n) { return GammaVector(RVector::Ones(n)); }

    int size() const { return static_cast<int>(gammas.size()); }
    bool anchored() const { return gammas[0] == 1.0; }
    GammaVector normalized() const { return GammaVector(gammas / gammas[0]); }
};

/// v_i from the anchor variance v_1 on the coupling manifold:
/// v_i^-1 = 1 + (gamma_1/gamma_i)(v_1^-1 - 1). v1 in (0, 1].
RVector variance_from_anchor(double v1, const GammaVector& g);

/// Estimator SINR-variance map: rho_i = 1/[V_xhat]_ii - 1/v_i with
/// V_xhat = (H'^H H'/sigma^2 + V^-1)^-1. All v_i in (0, 1].
RVector phi(const SystemModel& system, const RVector& v);

/// phi_i along the coupling manifold, as a scalar function of the anchor v1.
/// v1 = 0 is evaluated analytically as the matched-filter bound ||h'_i||^2/sigma^2.
double phi_scalar(const SystemModel& system, int user, double v1, const GammaVector& g);

/// Inverse of phi_scalar in v1 by bisection: |phi - rho| <= 1e-10 (1 + rho).
/// rho must lie in [phi_i(v1=1), phi_i(v1=0)); throws std::range_error otherwise.
double phi_inverse(const SystemModel& system, int user, double rho, const GammaVector& g);

struct TransferFunction {
    enum class Kind { EstimatorPhi, DecoderPsi };
    Kind kind = Kind::DecoderPsi;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    /// Breakpoints of the piecewise decoder map: rho = phi_i(1) and phi_i(0).
    double break_lo = 0.0;
    double break_hi = 0.0;
    std::function<double(double)> eval;

    double operator()(double x) const { return eval(x); }

    /// (x, f(x)) table on a log-spaced grid, for CSV export.
    std::vector<std::pair<double, double>> tabulate(int points = 1024) const;
};

/// Matched decoder map for user i:
///   psi_i(rho) = 1            on [0, phi_i(1))
///   psi_i(rho) = phi_i^-1(rho) (reported as v_i) on [phi_i(1), phi_i(0))
///   psi_i(rho) = 0            on [phi_i(0), inf)
TransferFunction matched_psi(const SystemModel& system, int user, const GammaVector& g);

struct RegularityReport {
    bool unit_at_zero = false;      // psi(0) = 1
    bool monotone = false;          // non-increasing on the grid
    bool few_breakpoints = false;   // at most 2 jump-sized steps
    bool vanishing_tail = false;    // rho * psi(rho) -> 0
    bool all() const { return unit_at_zero && monotone && few_breakpoints && vanishing_tail; }
};

RegularityReport check_regularity(const TransferFunction& psi, int grid);

}  // namespace noma
