#include "parisian/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "parisian/errors.hpp"

namespace parisian::special {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

std::vector<double> regularized_lower_gamma_table(double a, int count) {
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (count <= 0 || a <= 0.0) return out;

    // Poisson pmf e^{-a} a^k / k! in log space.
    auto log_pmf = [a](int k) { return -a + k * std::log(a) - std::lgamma(k + 1.0); };

    // P(count, a) = sum_{k >= count} pmf(k); the tail is summed directly.
    double tail = 0.0;
    for (int k = count;; ++k) {
        const double term = std::exp(log_pmf(k));
        tail += term;
        if (k > a && term <= 1e-17 * tail) break;
        if (k > count + 100000) break;
    }
    out[static_cast<std::size_t>(count - 1)] = tail;
    // P(s, a) = P(s + 1, a) + pmf(s)
    for (int s = count - 1; s >= 1; --s) {
        tail += std::exp(log_pmf(s));
        out[static_cast<std::size_t>(s - 1)] = tail;
    }
    return out;
}

double lower_gamma_finite_sum(int s, double a) {
    double partial = 0.0;
    double term = 1.0;
    for (int k = 0; k < s; ++k) {
        if (k > 0) term *= a / k;
        partial += term;
    }
    return std::tgamma(static_cast<double>(s)) * (1.0 - std::exp(-a) * partial);
}

double bessel_type_series(double c, double y, double shift, double rel_tol, int max_terms) {
    if (c <= 0.0) return 0.0;
    if (y <= 0.0) return c * std::exp(-shift);  // only the m = 0 term survives
    const double log_c = std::log(c);
    const double log_y = std::log(y);
    const double peak = std::sqrt(c * y);
    double sum = 0.0;
    for (int m = 0; m < max_terms; ++m) {
        const double log_term =
            (m + 1) * log_c + m * log_y - std::lgamma(m + 1.0) - std::lgamma(m + 2.0) - shift;
        const double term = std::exp(log_term);
        sum += term;
        if (m > peak && term <= rel_tol * sum) return sum;
    }
    throw SeriesFailure("series c=" + std::to_string(c) + ", y=" + std::to_string(y) +
                        " did not converge in " + std::to_string(max_terms) + " terms");
}

}  // namespace parisian::special
