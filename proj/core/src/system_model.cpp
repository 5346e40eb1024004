#include "noma/system_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace noma {

SystemModel::SystemModel(Matrix channel, RVector weights, double noise_variance)
    : channel_(std::move(channel)), weights_(std::move(weights)), noise_variance_(noise_variance) {
    if (channel_.rows() < 1 || channel_.cols() < 1) {
        throw std::invalid_argument("system.channel: must have at least one row and column");
    }
    if (!is_finite(channel_)) {
        throw std::invalid_argument("system.channel: non-finite entry");
    }
    if (weights_.size() != channel_.cols()) {
        std::ostringstream msg;
        msg << "system.weights: length " << weights_.size() << " does not match user count "
            << channel_.cols();
        throw std::invalid_argument(msg.str());
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("system.weights: non-positive weight at index " +
                                        std::to_string(i + 1));
        }
    }
    if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_)) {
        throw std::invalid_argument("system.noise_variance: must be positive and finite");
    }
    effective_ = channel_ * weights_.asDiagonal();
}

double SystemModel::column_energy(int user) const {
    return effective_.col(user).squaredNorm();
}

Matrix gram(const SystemModel& system) {
    const Matrix& hp = system.effective_channel();
    Matrix b = hp.adjoint() * hp / system.noise_variance();
    b.diagonal().array() += 1.0;
    // symmetrize away round-off so downstream Cholesky/eigensolvers see an
    // exactly Hermitian matrix
    return (b + b.adjoint().eval()) / 2.0;
}

namespace {

Complex parse_entry(const nlohmann::json& e, int row, int col) {
    std::ostringstream path;
    path << "system.channel[" << row << "][" << col << "]";
    if (e.is_number()) {
        return Complex(e.get<double>(), 0.0);
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return Complex(e[0].get<double>(), e[1].get<double>());
    }
    throw std::invalid_argument(path.str() + ": expected a real number or [re, im] pair");
}

}  // namespace

SystemModel build_system(const nlohmann::json& config) {
    if (!config.is_object()) {
        throw std::invalid_argument("system: expected an object");
    }
    for (const auto& [key, value] : config.items()) {
        (void)value;
        if (key != "channel" && key != "weights" && key != "noise_variance") {
            throw std::invalid_argument("system." + key + ": unknown key");
        }
    }
    if (!config.contains("channel") || !config["channel"].is_array() || config["channel"].empty()) {
        throw std::invalid_argument("system.channel: required, non-empty array of rows");
    }
    const auto& rows = config["channel"];
    const int n_rows = static_cast<int>(rows.size());
    int n_cols = -1;
    for (int r = 0; r < n_rows; ++r) {
        if (!rows[r].is_array() || rows[r].empty()) {
            throw std::invalid_argument("system.channel[" + std::to_string(r) +
                                        "]: expected a non-empty row array");
        }
        const int cols = static_cast<int>(rows[r].size());
        if (n_cols < 0) {
            n_cols = cols;
        } else if (cols != n_cols) {
            throw std::invalid_argument("system.channel[" + std::to_string(r) +
                                        "]: row length mismatch");
        }
    }
    // A row of two scalars is a row of two real entries; a row that is itself
    // an [re, im] pair is ambiguous only for 1x2 real channels, which we read
    // as two real entries.
    Matrix h(n_rows, n_cols);
    for (int r = 0; r < n_rows; ++r) {
        for (int c = 0; c < n_cols; ++c) {
            h(r, c) = parse_entry(rows[r][c], r, c);
        }
    }

    RVector w = RVector::Ones(n_cols);
    if (config.contains("weights")) {
        const auto& wj = config["weights"];
        if (!wj.is_array()) {
            throw std::invalid_argument("system.weights: expected an array");
        }
        w.resize(static_cast<Eigen::Index>(wj.size()));
        for (size_t i = 0; i < wj.size(); ++i) {
            if (!wj[i].is_number()) {
                throw std::invalid_argument("system.weights[" + std::to_string(i) +
                                            "]: expected a number");
            }
            w[static_cast<Eigen::Index>(i)] = wj[i].get<double>();
        }
    }

    if (!config.contains("noise_variance") || !config["noise_variance"].is_number()) {
        throw std::invalid_argument("system.noise_variance: required number");
    }
    return SystemModel(std::move(h), std::move(w), config["noise_variance"].get<double>());
}

}  // namespace noma
