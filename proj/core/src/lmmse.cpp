#include "noma/lmmse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "noma/rng.hpp"

namespace noma {

namespace {
constexpr double kVarianceFloor = 1e-12;
}

Constellation::Constellation(std::vector<Complex> pts) : points(std::move(pts)) {
    if (points.empty()) {
        throw std::invalid_argument("constellation: empty");
    }
    double power = 0.0;
    for (const Complex& s : points) {
        power += std::norm(s);
    }
    power /= static_cast<double>(points.size());
    if (std::abs(power - 1.0) > 1e-9) {
        throw std::invalid_argument("constellation: average power must be 1");
    }
}

Constellation Constellation::qpsk() {
    const double a = std::sqrt(0.5);
    return Constellation({{a, a}, {a, -a}, {-a, a}, {-a, -a}});
}

GaussianBelief prior_moments(const LikelihoodVector& lv, const Constellation& c) {
    if (lv.probs.size() != c.points.size()) {
        throw std::invalid_argument("prior_moments: likelihood/constellation length mismatch");
    }
    double total = 0.0;
    for (double p : lv.probs) {
        if (p < 0.0) {
            throw std::invalid_argument("prior_moments: negative likelihood");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("prior_moments: likelihoods must sum to 1");
    }
    GaussianBelief out;
    out.mean = Complex(0, 0);
    for (size_t k = 0; k < c.points.size(); ++k) {
        out.mean += lv.probs[k] * c.points[k];
    }
    out.variance = 0.0;
    for (size_t k = 0; k < c.points.size(); ++k) {
        out.variance += lv.probs[k] * std::norm(c.points[k] - out.mean);
    }
    return out;
}

LmmseResult lmmse_estimate(const SystemModel& system, const CVector& y, const CVector& xbar,
                           const RVector& v, bool check_alternate_form) {
    const int nu = system.num_users();
    const int nr = system.num_rx();
    if (y.size() != nr || xbar.size() != nu || v.size() != nu) {
        throw std::invalid_argument("lmmse_estimate: dimension mismatch");
    }
    RVector vf = v;
    for (Eigen::Index i = 0; i < vf.size(); ++i) {
        if (vf[i] < 0.0 || !std::isfinite(vf[i])) {
            throw std::invalid_argument("lmmse_estimate: invalid prior variance");
        }
        vf[i] = std::max(vf[i], kVarianceFloor);
    }
    const Matrix& hp = system.effective_channel();
    const double inv_s2 = 1.0 / system.noise_variance();

    Matrix precision = hp.adjoint() * hp * inv_s2;
    precision += Matrix(vf.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>());
    Eigen::LLT<Matrix> llt((precision + precision.adjoint().eval()) / 2.0);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("lmmse_estimate: posterior precision not positive definite");
    }
    LmmseResult result;
    result.cov = llt.solve(Matrix::Identity(nu, nu));
    const CVector rhs =
        vf.cwiseInverse().cast<Complex>().asDiagonal() * xbar + inv_s2 * (hp.adjoint() * y);
    result.xhat = llt.solve(rhs);

    if (check_alternate_form) {
        // innovation-side form: xhat = xbar + V H'^H (sigma^2 I + H' V H'^H)^-1 (y - H' xbar)
        Matrix inner = hp * vf.cast<Complex>().asDiagonal() * hp.adjoint();
        inner.diagonal().array() += system.noise_variance();
        Eigen::LLT<Matrix> llt2((inner + inner.adjoint().eval()) / 2.0);
        const CVector alt = xbar + vf.cast<Complex>().asDiagonal() *
                                       (hp.adjoint() * llt2.solve((y - hp * xbar).eval()));
        const double rel = (alt - result.xhat).norm() / (1.0 + result.xhat.norm());
        if (rel > 1e-9) {
            throw std::logic_error("lmmse_estimate: estimator forms disagree beyond 1e-9");
        }
    }
    return result;
}

GaussianBelief extrinsic_combine(const GaussianBelief& posterior, const GaussianBelief& prior) {
    if (!(prior.variance > 0.0) || !(posterior.variance > 0.0)) {
        throw std::invalid_argument("extrinsic_combine: variances must be positive");
    }
    if (posterior.variance >= prior.variance) {
        throw std::invalid_argument("extrinsic_combine: non-informative posterior");
    }
    GaussianBelief out;
    const double inv_u = 1.0 / posterior.variance - 1.0 / prior.variance;
    out.variance = 1.0 / inv_u;
    out.mean = out.variance *
               (posterior.mean / posterior.variance - prior.mean / prior.variance);
    return out;
}

EseValidation validate_awgn_model(const SystemModel& system, const RVector& v,
                                  std::uint64_t trials, std::uint64_t seed, int threads) {
    const int nu = system.num_users();
    const int nr = system.num_rx();
    if (v.size() != nu) {
        throw std::invalid_argument("validate_awgn_model: variance vector length mismatch");
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || v[i] > 1.0) {
            throw std::invalid_argument("validate_awgn_model: variances must lie in (0, 1]");
        }
    }
    if (trials == 0) {
        throw std::invalid_argument("validate_awgn_model: zero trials");
    }

    const Matrix& hp = system.effective_channel();
    const double sigma = std::sqrt(system.noise_variance());

    // Precompute the deterministic posterior covariance once: it depends on v
    // only, not on the realization.
    const double inv_s2 = 1.0 / system.noise_variance();
    Matrix precision = hp.adjoint() * hp * inv_s2;
    precision += Matrix(v.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>());
    Eigen::LLT<Matrix> llt((precision + precision.adjoint().eval()) / 2.0);
    const Matrix cov = llt.solve(Matrix::Identity(nu, nu));
    RVector vhat(nu), u(nu);
    for (int i = 0; i < nu; ++i) {
        vhat[i] = cov(i, i).real();
        u[i] = 1.0 / (1.0 / vhat[i] - 1.0 / v[i]);
    }

    struct Accum {
        RVector err_power;
        CVector err_sig_cross;
        RVector sig_power;
    };
    // Fixed-size trial blocks reduced in block order, so the result is
    // bit-identical for any thread count.
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;
    const int nthreads = std::max(1, threads);
    std::vector<Accum> partial(static_cast<size_t>(nblocks),
                               {RVector::Zero(nu), CVector::Zero(nu), RVector::Zero(nu)});

    auto worker = [&](int tid) {
        for (std::uint64_t block = static_cast<std::uint64_t>(tid); block < nblocks;
             block += static_cast<std::uint64_t>(nthreads)) {
            Accum& acc = partial[static_cast<size_t>(block)];
            const std::uint64_t begin = block * kBlock;
            const std::uint64_t end = std::min(trials, begin + kBlock);
            for (std::uint64_t trial = begin; trial < end; ++trial) {
            std::mt19937_64 rng = substream(seed, trial);
            CVector x(nu), xbar(nu);
            for (int i = 0; i < nu; ++i) {
                x[i] = standard_complex_gaussian(rng);
            }
            for (int i = 0; i < nu; ++i) {
                const Complex noise = standard_complex_gaussian(rng);
                xbar[i] = (1.0 - v[i]) * x[i] + std::sqrt(v[i] * (1.0 - v[i])) * noise;
            }
            CVector y = hp * x;
            for (int r = 0; r < nr; ++r) {
                y[r] += sigma * standard_complex_gaussian(rng);
            }
            const CVector rhs =
                v.cwiseInverse().cast<Complex>().asDiagonal() * xbar + inv_s2 * (hp.adjoint() * y);
            const CVector xhat = llt.solve(rhs);
            for (int i = 0; i < nu; ++i) {
                const Complex b = u[i] * (xhat[i] / vhat[i] - xbar[i] / v[i]);
                const Complex err = b - x[i];
                acc.err_power[i] += std::norm(err);
                acc.err_sig_cross[i] += err * std::conj(x[i]);
                acc.sig_power[i] += std::norm(x[i]);
            }
            }
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    // reduce block partials in index order
    RVector err_power = RVector::Zero(nu), sig_power = RVector::Zero(nu);
    CVector cross = CVector::Zero(nu);
    for (const Accum& acc : partial) {
        err_power += acc.err_power;
        sig_power += acc.sig_power;
        cross += acc.err_sig_cross;
    }

    EseValidation out;
    out.trials = trials;
    out.empirical_snr = RVector(nu);
    out.error_signal_corr = RVector(nu);
    for (int i = 0; i < nu; ++i) {
        out.empirical_snr[i] = static_cast<double>(trials) / err_power[i];
        out.error_signal_corr[i] =
            std::abs(cross[i]) / std::sqrt(err_power[i] * sig_power[i]);
    }
    return out;
}

}  // namespace noma
