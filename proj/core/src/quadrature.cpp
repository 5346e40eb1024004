#include "noma/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <stdexcept>
#include <string>

namespace noma {

namespace {

double trampoline(double x, void* params) {
    const auto* f = static_cast<const std::function<double(double)>*>(params);
    return (*f)(x);
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (!(abs_tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerance must be positive");
    }
    if (!(a < b)) {
        throw std::invalid_argument("integrate: need a < b");
    }
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;

    constexpr size_t kLimit = 512;
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kLimit));
    gsl_function gf;
    gf.function = &trampoline;
    gf.params = const_cast<std::function<double(double)>*>(&f);

    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qag(&gf, a, b, abs_tol, 0.0, kLimit, GSL_INTEG_GAUSS61,
                                     ws.get(), &result, &abserr);
    if (status == GSL_EROUND) {
        // retry with singular-endpoint extrapolation before giving up
        status = gsl_integration_qags(&gf, a, b, abs_tol, 0.0, kLimit, ws.get(), &result, &abserr);
    }
    if (status != GSL_SUCCESS && abserr > abs_tol) {
        throw std::runtime_error("integrate: quadrature did not converge to tolerance " +
                                 std::to_string(abs_tol));
    }
    return result;
}

}  // namespace noma
