#include "parisian/kernels.hpp"

#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "parisian/errors.hpp"

namespace parisian {

int available_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace kernels {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("linspace needs at least 2 points");
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out[n - 1] = hi;
    return out;
}

namespace {

template <class F>
std::vector<double> map_grid(std::span<const double> xs, Execution exec, F&& f) {
    std::vector<double> out(xs.size());
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(xs[i]);
        return out;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = f(xs[i]);
    return out;
}

double derivative_or_nan(const ParisianScale& ps, double x) {
    try {
        return ps.derivative(x);
    } catch (const UndefinedDerivative&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

kernels::GridMinimum row_minimum(std::span<const double> xs, std::span<const double> vs,
                                 double beta, std::size_t i) {
    GridMinimum best;
    best.g = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
        const double gap = xs[j] - xs[i] - beta;
        if (!(gap > 0.0)) continue;
        const double g = (vs[j] - vs[i]) / gap;
        if (g < best.g) {
            best = GridMinimum{g, i, j, true};
        }
    }
    return best;
}

bool better(const GridMinimum& a, const GridMinimum& b) {
    if (!a.found) return false;
    if (!b.found) return true;
    if (a.g != b.g) return a.g < b.g;
    return a.i < b.i || (a.i == b.i && a.j < b.j);
}

}  // namespace

std::vector<double> evaluate_V(const ParisianScale& ps, std::span<const double> xs,
                               Execution exec) {
    return map_grid(xs, exec, [&](double x) { return ps.value(x); });
}

std::vector<double> evaluate_V_prime(const ParisianScale& ps, std::span<const double> xs,
                                     Execution exec) {
    return map_grid(xs, exec, [&](double x) { return derivative_or_nan(ps, x); });
}

GridMinimum min_g_on_grid(std::span<const double> xs, std::span<const double> vs, double beta,
                          Execution exec) {
    if (xs.size() != vs.size()) throw DomainError("grid and values differ in length");
    const std::size_t n = xs.size();
    std::vector<GridMinimum> rows(n);
    const auto ni = static_cast<std::ptrdiff_t>(n);
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < ni; ++i) rows[i] = row_minimum(xs, vs, beta, i);
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < ni; ++i) rows[i] = row_minimum(xs, vs, beta, i);
    }
    GridMinimum best;
    for (const auto& row : rows) {
        if (better(row, best)) best = row;
    }
    return best;
}

}  // namespace kernels
}  // namespace parisian
