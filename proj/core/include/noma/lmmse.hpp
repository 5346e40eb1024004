#pragma once

#include <cstdint>
#include <vector>

#include "noma/system_model.hpp"

namespace noma {

/// Signaling constellation with unit average power.
struct Constellation {
    std::vector<Complex> points;

    explicit Constellation(std::vector<Complex> pts);

    static Constellation bpsk() { return Constellation({Complex(1, 0), Complex(-1, 0)}); }
    static Constellation qpsk();
};

struct LikelihoodVector {
    std::vector<double> probs;  // one per constellation point, sums to 1
};

struct GaussianBelief {
    Complex mean;
    double variance = 0.0;
};

/// Mean and variance of a symbol under a likelihood vector over the
/// constellation. Variance 0 only for a point mass.
GaussianBelief prior_moments(const LikelihoodVector& lv, const Constellation& c);

struct LmmseResult {
    CVector xhat;
    Matrix cov;  // posterior covariance V_xhat
};

/// Per-use LMMSE estimate given prior means xbar and per-user variances v.
/// xhat = V_xhat (V^-1 xbar + H'^H y / sigma^2), V_xhat = (H'^H H'/sigma^2 + V^-1)^-1.
/// Variances below 1e-12 are floored. When check_alternate_form is set, the
/// covariance-side form and the innovation-side rewriting (matrix inversion
/// lemma) are both evaluated and must agree to 1e-9 relative.
LmmseResult lmmse_estimate(const SystemModel& system, const CVector& y, const CVector& xbar,
                           const RVector& v, bool check_alternate_form = false);

/// Extrinsic belief: remove the prior from the posterior.
/// u^-1 = v_post^-1 - v_prior^-1, b/u = m_post/v_post - m_prior/v_prior.
/// Throws if the posterior carries no information beyond the prior.
GaussianBelief extrinsic_combine(const GaussianBelief& posterior, const GaussianBelief& prior);

struct EseValidation {
    RVector empirical_snr;        // 1 / mean |b_i - x_i|^2
    RVector error_signal_corr;    // |corr(b_i - x_i, x_i)|
    std::uint64_t trials = 0;
};

/// Monte Carlo check that the extrinsic output behaves as an AWGN observation
/// of the true symbol. Priors are synthesized MMSE-consistently:
/// xbar = (1-v) x + sqrt(v(1-v)) CN(0,1), so E|x - xbar|^2 = v exactly.
/// Bit-reproducible for fixed (seed, trials) regardless of thread count.
EseValidation validate_awgn_model(const SystemModel& system, const RVector& v,
                                  std::uint64_t trials, std::uint64_t seed, int threads = 1);

}  // namespace noma
