#pragma once

#include <vector>

namespace parisian::special {

double normal_cdf(double x);
double normal_pdf(double x);

/// Regularized lower incomplete gamma P(s, a) = gamma(s, a) / Gamma(s) for
/// s = 1 .. count, returned as out[s - 1]. Integer orders only.
std::vector<double> regularized_lower_gamma_table(double a, int count);

/// gamma(s, a) for integer s >= 1 by the finite sum
/// (s-1)! (1 - e^{-a} sum_{k < s} a^k / k!). Loses relative accuracy when
/// s >> a; kept as a reference for the table above.
double lower_gamma_finite_sum(int s, double a);

/// sum_{m >= 0} c^{m+1} y^m / (m! (m+1)!) * exp(-shift), summed in log space.
/// Stops when a term falls below rel_tol of the partial sum past the peak;
/// throws SeriesFailure after max_terms.
double bessel_type_series(double c, double y, double shift, double rel_tol, int max_terms);

}  // namespace parisian::special
