#pragma once

#include <cmath>
#include <string_view>
#include <variant>

#include "parisian/errors.hpp"

namespace parisian {

/// Linear Brownian motion X_t = mu t + sigma B_t.
struct Brownian {
    double mu = 0.0;
    double sigma = 1.0;
};

/// Cramér–Lundberg process X_t = p t - sum_{i <= N_t} U_i with
/// N Poisson(lambda) and U_i ~ Exp(mu_claim).
struct CramerLundberg {
    double p = 1.0;
    double lambda = 1.0;
    double mu_claim = 1.0;
};

using ModelSpec = std::variant<Brownian, CramerLundberg>;

std::string_view model_name(const ModelSpec& model);

/// Throws InvalidParameter when the model's own invariants fail.
void validate(const ModelSpec& model);

/// Surplus model plus refraction, discounting, Parisian delay and cost.
struct ProblemSpec {
    ModelSpec model = Brownian{};
    double delta = 0.0;  ///< refraction rate above zero
    double q = 0.0;      ///< discount rate
    double r = 0.0;      ///< Parisian delay
    double beta = 0.0;   ///< fixed transaction cost per payment
};

/// Throws InvalidParameter / InvalidRefraction.
void validate(const ProblemSpec& spec);

bool is_brownian(const ProblemSpec& spec);

/// psi(theta) = log E[exp(theta X_1)]. Defined for all theta in the Brownian
/// case and for theta > -mu_claim in the Cramér–Lundberg case.
double laplace_exponent(const ModelSpec& model, double theta);

/// Y_t = X_t - delta t, the dynamics of the refracted process above zero.
ModelSpec drift_adjusted(const ProblemSpec& spec);

/// Phi(q): largest root of psi(theta) = q.
double right_inverse_phi(const ModelSpec& model, double q);

/// a_plus e^{k_plus x} - a_minus e^{k_minus x}. Every closed form in this
/// library on [0, inf) reduces to this shape with k_plus > 0 > k_minus.
struct ExpPair {
    double a_plus = 0.0;
    double k_plus = 0.0;
    double a_minus = 0.0;
    double k_minus = 0.0;

    double value(double x) const;
    /// order-th derivative, order >= 0.
    double derivative(double x, int order = 1) const;
    /// Antiderivative vanishing at 0.
    double integral(double x) const;
    /// Minimiser on [0, inf) of the first derivative (0 when it is increasing).
    double argmin_derivative() const;
};

/// Largest exponent accepted before OverflowRange is raised.
inline constexpr double kMaxExponent = 700.0;

/// exp() that throws OverflowRange instead of returning inf.
double checked_exp(double exponent);

/// rho_1, rho_2 > 0: -rho_1 and rho_2 are the roots of psi(theta) = q.
struct BrownianRoots {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho = 0.0;  ///< rho1 + rho2
};

/// q_plus > 0 > q_minus roots of psi(theta) = q, amplitudes A_plus - A_minus = 1.
struct CramerLundbergRoots {
    double q_plus = 0.0;
    double q_minus = 0.0;
    double a_plus = 0.0;
    double a_minus = 0.0;
};

using ProcessRoots = std::variant<BrownianRoots, CramerLundbergRoots>;

/// Roots and amplitudes for X and Y, computed once per ProblemSpec.
struct ScaleCoefficients {
    double q = 0.0;
    ProcessRoots x;
    ProcessRoots y;
    ExpPair scale_x;  ///< W^(q) on [0, inf)
    ExpPair scale_y;  ///< W^(q) of Y on [0, inf)
};

BrownianRoots brownian_roots(double mu, double sigma, double q);
CramerLundbergRoots cramer_lundberg_roots(double p, double lambda, double mu_claim, double q);

ScaleCoefficients compute_coefficients(const ProblemSpec& spec);

}  // namespace parisian
