#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace noma {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Log-determinant of a Hermitian positive definite matrix via Cholesky.
/// Throws std::domain_error if the matrix is not positive definite.
inline double log_det_hermitian(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("log_det_hermitian: matrix is not positive definite");
    }
    double acc = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        acc += std::log(L(i, i).real());
    }
    return 2.0 * acc;
}

inline bool is_finite(const Matrix& m) {
    return m.allFinite();
}

}  // namespace noma
