#include "parisian/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "parisian/errors.hpp"

namespace parisian {

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
    const double allowed = std::max(opts.abs_tol, 10.0 * opts.rel_tol * l1);
    if (!std::isfinite(value) || error > allowed) {
        throw QuadratureFailure("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                "] stopped with error estimate " + std::to_string(error));
    }
    return value;
}

}  // namespace parisian
