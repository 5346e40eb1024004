#pragma once

#include <functional>

namespace noma {

/// Adaptive Gauss-Kronrod integration of f over [a, b] to the requested
/// absolute tolerance. Throws std::runtime_error on non-convergence.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol);

}  // namespace noma
