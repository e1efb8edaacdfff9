#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parisian/parisian_scale.hpp"

namespace parisian {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial one is kept for tests and benchmarks.
enum class Execution { Serial, Parallel };

/// Number of OpenMP worker threads (1 when built without OpenMP).
int available_threads();

namespace kernels {

/// n >= 2 equally spaced points on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// V at every grid point.
std::vector<double> evaluate_V(const ParisianScale& ps, std::span<const double> xs,
                               Execution exec = Execution::Parallel);

/// V' at every grid point; NaN where the derivative is undefined.
std::vector<double> evaluate_V_prime(const ParisianScale& ps, std::span<const double> xs,
                                     Execution exec = Execution::Parallel);

struct GridMinimum {
    double g = 0.0;
    std::size_t i = 0;  ///< index of c1
    std::size_t j = 0;  ///< index of c2
    bool found = false;
};

/// min over i < j with xs[j] - xs[i] > beta of (vs[j] - vs[i]) / (xs[j] - xs[i] - beta).
/// Ties resolve to the smallest (i, j), independent of the schedule.
GridMinimum min_g_on_grid(std::span<const double> xs, std::span<const double> vs, double beta,
                          Execution exec = Execution::Parallel);

}  // namespace kernels
}  // namespace parisian
