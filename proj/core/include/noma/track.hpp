#pragma once

#include <vector>

#include "noma/transfer.hpp"

namespace noma {

struct TrackStep {
    int iteration = 0;
    RVector v;     // per-user variances after the decoder half-step
    RVector rho;   // estimator SINRs feeding that half-step
};

struct VarianceTrack {
    std::vector<TrackStep> steps;
    bool decodable = false;
    RVector fixed_point;
};

struct DecoderFamily {
    enum class Kind { MatchedWithMargin, Genie, CustomTable };
    Kind kind = Kind::MatchedWithMargin;
    double margin = 0.0;                  // multiplicative SINR back-off
    std::vector<TransferFunction> psis;   // per user, CustomTable only

    static DecoderFamily matched(double margin_) {
        DecoderFamily d;
        d.kind = Kind::MatchedWithMargin;
        d.margin = margin_;
        return d;
    }
    static DecoderFamily genie() {
        DecoderFamily d;
        d.kind = Kind::Genie;
        return d;
    }
    static DecoderFamily custom(std::vector<TransferFunction> psis_) {
        DecoderFamily d;
        d.kind = Kind::CustomTable;
        d.psis = std::move(psis_);
        return d;
    }
};

/// Estimator-decoder fixed-point iteration from v(0) = 1:
/// rho(tau) = phi(v(tau-1)), v(tau) = psi(rho(tau)). Stops when the sup-norm
/// step falls below tol or max_iter is reached; decodable iff the fixed point
/// is component-wise below tol.
///
/// For the matched-with-margin family the decoder half-step advances a shared
/// anchor variance: each user inverts its boosted SINR through its own
/// scalarized phi and the largest (most conservative) anchor wins, so the
/// track stays exactly on the gamma-coupling manifold.
VarianceTrack simulate_track(const SystemModel& system, const GammaVector& g,
                             const DecoderFamily& dec, int max_iter, double tol);

/// Matched psi with its SINR argument boosted by (1 + margin): all
/// breakpoints shift left by that factor and the induced decoder-side rate
/// drops strictly below the matched rate.
TransferFunction backed_off_psi(const SystemModel& system, int user, const GammaVector& g,
                                double margin);

}  // namespace noma
