#pragma once

#include "noma/capacity.hpp"
#include "noma/transfer.hpp"

namespace noma {

/// Spectral data of A_gamma = Lambda^{1/2} (H'^H H'/sigma^2 + I) Lambda^{1/2}:
/// eigenvalues and per-user squared eigenvector weights |u_ij|^2.
struct EigenRateDecomposition {
    RVector eigenvalues;       // ascending, all >= min(gamma)
    Eigen::MatrixXd weights;   // rows: users, cols: eigenmodes; rows sum to 1
};

EigenRateDecomposition rate_decomposition(const SystemModel& system, const GammaVector& g);

/// R_i = sum_j |u_ij|^2 ln(lambda_j) - ln(gamma_i). Sum equals the sum
/// capacity for every gamma.
RatePoint rates_closed_form(const SystemModel& system, const GammaVector& g);

/// Same rate by adaptive quadrature of the regularized integrand
/// 1/(1+t) - [(A_gamma + tI)^-1]_ii over t in [0, inf), via t = u/(1-u).
double rate_quadrature(const SystemModel& system, int user, const GammaVector& g, double tol);

/// Same rate from the decoder side: integral of (rho + 1/psi_i(rho))^-1 with
/// the matched psi. This is the equality case of the area theorem.
double rate_from_decoder_transfer(const SystemModel& system, int user, const GammaVector& g,
                                  double tol);

/// Decoder-side rate for an arbitrary admissible psi (e.g. backed off below
/// the matched map); strictly below the matched rate when psi < matched.
double rate_from_psi(const TransferFunction& psi, double tol);

/// Two-user closed form. R1 follows the analytic eta expression; R2 is
/// sum capacity minus R1. With use_printed_r2_form the corrected-sign
/// variant of the R2 log ratio is evaluated instead.
RatePoint two_user_closed_form(const SystemModel& system, double gamma2,
                               bool use_printed_r2_form = false);

/// Rates at the gamma ladder gamma_{k_i} = ladder^(i-1), which converge to
/// the SIC extreme point of the given decoding order as ladder grows.
RatePoint sic_extreme_limit(const SystemModel& system, const UserPermutation& perm, double ladder);

struct SymmetricRate {
    double per_user = 0.0;      // C_sum / Nu
    RVector at_unit_gamma;      // closed-form rates at gamma = (1, ..., 1)
    double spread = 0.0;        // max_i |R_i - per_user|
};

/// Symmetric per-user target C_sum/Nu plus spread diagnostics. Warns (via the
/// returned spread, not an error) when weights are unequal.
SymmetricRate symmetric_rate(const SystemModel& system);

}  // namespace noma
