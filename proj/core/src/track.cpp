#include "noma/track.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noma {

TransferFunction backed_off_psi(const SystemModel& system, int user, const GammaVector& g,
                                double margin) {
    if (!(margin > 0.0)) {
        throw std::invalid_argument("backed_off_psi: margin must be positive");
    }
    TransferFunction base = matched_psi(system, user, g);
    TransferFunction psi = base;
    const double boost = 1.0 + margin;
    psi.break_lo = base.break_lo / boost;
    psi.break_hi = base.break_hi / boost;
    psi.eval = [base = std::move(base), boost](double rho) { return base(rho * boost); };
    return psi;
}

namespace {

/// Anchor update for one user under a boosted SINR: the v1 at which the
/// user's scalarized phi equals (1 + margin) * rho, clamped to the psi
/// branches outside the invertible band.
double anchor_after_decode(const SystemModel& system, int user, const GammaVector& g,
                           double rho, double margin) {
    const double boosted = rho * (1.0 + margin);
    const double at_one = phi_scalar(system, user, 1.0, g);
    const double at_zero = phi_scalar(system, user, 0.0, g);
    if (boosted < at_one) {
        return 1.0;
    }
    if (boosted >= at_zero) {
        return 0.0;
    }
    return phi_inverse(system, user, boosted, g);
}

}  // namespace

VarianceTrack simulate_track(const SystemModel& system, const GammaVector& g,
                             const DecoderFamily& dec, int max_iter, double tol) {
    const int nu = system.num_users();
    if (g.size() != nu) {
        throw std::invalid_argument("simulate_track: gamma length mismatch");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("simulate_track: max_iter must be >= 1");
    }
    if (dec.kind == DecoderFamily::Kind::CustomTable &&
        static_cast<int>(dec.psis.size()) != nu) {
        throw std::invalid_argument("simulate_track: custom decoder table length mismatch");
    }
    if (dec.kind == DecoderFamily::Kind::MatchedWithMargin && dec.margin < 0.0) {
        throw std::invalid_argument("simulate_track: margin must be >= 0");
    }

    VarianceTrack track;
    RVector v = RVector::Ones(nu);
    double anchor = 1.0;

    for (int tau = 1; tau <= max_iter; ++tau) {
        const RVector prev = v;
        RVector rho;
        if (v.minCoeff() > 0.0) {
            rho = phi(system, v);
        } else {
            // variances at exactly zero: interference-free limit per user
            rho = RVector(nu);
            for (int i = 0; i < nu; ++i) {
                rho[i] = system.column_energy(i) / system.noise_variance();
            }
        }

        switch (dec.kind) {
            case DecoderFamily::Kind::Genie:
                v.setZero();
                break;
            case DecoderFamily::Kind::MatchedWithMargin: {
                double next_anchor = 0.0;
                for (int i = 0; i < nu; ++i) {
                    next_anchor = std::max(
                        next_anchor, anchor_after_decode(system, i, g, rho[i], dec.margin));
                }
                anchor = std::min(anchor, next_anchor);
                v = anchor > 0.0 ? variance_from_anchor(anchor, g)
                                 : RVector(RVector::Zero(nu));
                break;
            }
            case DecoderFamily::Kind::CustomTable:
                for (int i = 0; i < nu; ++i) {
                    v[i] = dec.psis[static_cast<size_t>(i)](rho[i]);
                }
                break;
        }

        track.steps.push_back({tau, v, rho});
        if ((v - prev).cwiseAbs().maxCoeff() < tol) {
            break;
        }
    }

    track.fixed_point = v;
    track.decodable = (v.array() < tol).all();
    return track;
}

}  // namespace noma
