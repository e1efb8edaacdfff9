#pragma once

#include <limits>

#include "parisian/levy_models.hpp"
#include "parisian/quadrature.hpp"

namespace parisian {

/// Law of sum_{i <= N_r} U_i: an atom e^{-lambda r} at 0 plus a density.
struct CompoundPoissonLaw {
    double lambda = 1.0;
    double mu_claim = 1.0;
    double r = 1.0;
    double series_tol = 1e-12;
    int max_terms = 500;

    double atom() const;
};

/// Absolutely continuous part at y > 0 (the atom is reported by atom()).
double compound_density(const CompoundPoissonLaw& law, double y);

/// Parisian refracted scale function V^(q), with V(x)/V(a) the discounted
/// probability of reaching a before Parisian ruin.
///
/// On [0, inf) both models reduce V to an ExpPair, precomputed here. Below 0
/// Brownian uses the two normal-CDF terms; Cramér–Lundberg uses the
/// incomplete-gamma series on [-pr, 0] and vanishes below -pr. The
/// Cramér–Lundberg value at -pr follows the middle region (right-continuous).
class ParisianScale {
public:
    explicit ParisianScale(const ProblemSpec& spec, double series_tol = 1e-12,
                           int max_terms = 500);

    const ProblemSpec& spec() const noexcept { return spec_; }
    const ScaleCoefficients& coefficients() const noexcept { return coeffs_; }
    double series_tol() const noexcept { return series_tol_; }

    double value(double x) const;
    /// Throws UndefinedDerivative at 0 and -pr for Cramér–Lundberg.
    double derivative(double x) const;

    /// int_0^inf W'(z) (z/r) P(X_r in dz). For Cramér–Lundberg this is the
    /// constant C of the series representation.
    double derivative_moment() const noexcept { return derivative_moment_; }

    /// V restricted to [0, inf).
    const ExpPair& positive_branch() const noexcept { return positive_; }

    /// -pr for Cramér–Lundberg (V = 0 below), -inf for Brownian.
    double support_start() const noexcept { return support_start_; }

    /// Minimiser of V' on [0, inf).
    double argmin_derivative() const { return positive_.argmin_derivative(); }

private:
    double brownian_negative(double x) const;
    double brownian_negative_derivative(double x) const;
    double cl_middle(double x, bool derivative) const;
    double cl_constant() const;
    double brownian_constant() const;

    ProblemSpec spec_;
    ScaleCoefficients coeffs_;
    double series_tol_;
    int max_terms_;
    double derivative_moment_ = 0.0;
    double support_start_ = -std::numeric_limits<double>::infinity();
    ExpPair positive_;
};

double V(const ParisianScale& ps, double x);
double V_prime(const ParisianScale& ps, double x);
/// Throws DomainError for the Brownian model.
double constant_C(const ParisianScale& ps);

/// Direct quadrature of V(x) = int_0^inf w(x; -z) (z/r) P(X_r in dz).
/// Brownian integrates z up to mu r + 12 sigma sqrt(r).
double V_quadrature_oracle(const ParisianScale& ps, double x, const QuadratureOptions& opts = {});

/// w(x; -z) from its convolution definition
/// W(x + z) + delta int_0^x WW(x - y) W'(y + z) dy.
double refracted_w_convolution(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x,
                               double z, const QuadratureOptions& opts = {});

}  // namespace parisian
