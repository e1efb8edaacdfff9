#pragma once

#include <functional>

namespace parisian {

struct QuadratureOptions {
    double rel_tol = 1e-13;
    double abs_tol = 1e-13;
    unsigned max_depth = 20;
};

/// Adaptive Gauss–Kronrod (31 point) on [a, b]. Throws QuadratureFailure when
/// the error estimate stays above max(abs_tol, rel_tol * |I|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace parisian
