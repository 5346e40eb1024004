#pragma once

#include <nlohmann/json_fwd.hpp>

#include "noma/linalg.hpp"

namespace noma {

/// Uplink MIMO-NOMA instance: N_u single-antenna users, N_r receive antennas.
/// The effective channel folds the per-user amplitude weights into the
/// physical channel; everything downstream works on the effective channel.
class SystemModel {
public:
    SystemModel(Matrix channel, RVector weights, double noise_variance);

    int num_rx() const { return static_cast<int>(channel_.rows()); }
    int num_users() const { return static_cast<int>(channel_.cols()); }
    double noise_variance() const { return noise_variance_; }
    const Matrix& channel() const { return channel_; }
    const RVector& weights() const { return weights_; }

    /// H' = H * diag(w_1, ..., w_Nu)
    const Matrix& effective_channel() const { return effective_; }

    /// ||h'_i||^2, squared norm of the i-th effective column.
    double column_energy(int user) const;

private:
    Matrix channel_;
    RVector weights_;
    double noise_variance_;
    Matrix effective_;
};

/// B = I + H'^H H' / sigma_n^2. Hermitian, eigenvalues >= 1.
Matrix gram(const SystemModel& system);

/// Builds a validated SystemModel from a parsed JSON config block.
/// Expected keys: "channel" (rows of reals or [re, im] pairs),
/// optional "weights" (default all 1.0), "noise_variance".
/// Errors name the offending field.
SystemModel build_system(const nlohmann::json& config);

}  // namespace noma
