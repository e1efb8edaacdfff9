#include "parisian/scale_functions.hpp"

#include <cmath>

namespace parisian {

ScaleFunction ScaleFunction::of(const ScaleCoefficients& coeffs, Process which) {
    return ScaleFunction{which == Process::X ? coeffs.scale_x : coeffs.scale_y, coeffs.q};
}

double W(const ScaleFunction& sf, double x) { return x < 0.0 ? 0.0 : sf.pair.value(x); }

double W_prime(const ScaleFunction& sf, double x) {
    return x < 0.0 ? 0.0 : sf.pair.derivative(x, 1);
}

double Z(const ScaleFunction& sf, double x) {
    return x <= 0.0 ? 1.0 : 1.0 + sf.q * sf.pair.integral(x);
}

ExpPair refracted_w_pair(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double z) {
    if (z < 0.0) throw DomainError("refracted_w needs z >= 0");
    const ScaleFunction wx = ScaleFunction::of(coeffs, Process::X);
    const double wz = W(wx, z);
    const double wpz = W_prime(wx, z);

    if (const auto* yr = std::get_if<BrownianRoots>(&coeffs.y)) {
        // (sigma^2/2) W'(z) WW(x) + W(z)/rho^Y (rho1^Y e^{rho2^Y x} + rho2^Y e^{-rho1^Y x})
        return ExpPair{(wpz + yr->rho1 * wz) / yr->rho, yr->rho2,
                       (wpz - yr->rho2 * wz) / yr->rho, -yr->rho1};
    }

    const auto& c = std::get<CramerLundberg>(spec.model);
    const auto& xr = std::get<CramerLundbergRoots>(coeffs.x);
    const auto& yr = std::get<CramerLundbergRoots>(coeffs.y);
    const double py = c.p - spec.delta;
    // Regrouped product term; avoids cancelling two O(1) products near x = 0.
    const double k = c.mu_claim * c.lambda /
                     (c.p * py * (xr.q_plus - xr.q_minus) * (yr.q_plus - yr.q_minus));
    const double spread = checked_exp(xr.q_plus * z) - std::exp(xr.q_minus * z);
    return ExpPair{yr.a_plus * wz - k * spread, yr.q_plus, yr.a_minus * wz - k * spread,
                   yr.q_minus};
}

double refracted_w(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x, double z) {
    if (x < 0.0) return W(ScaleFunction::of(coeffs, Process::X), x + z);
    return refracted_w_pair(spec, coeffs, z).value(x);
}

double refracted_w_prime(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x,
                         double z) {
    if (x < 0.0) return W_prime(ScaleFunction::of(coeffs, Process::X), x + z);
    if (x == 0.0 && !is_brownian(spec)) {
        throw UndefinedDerivative("w'(x; -z) is undefined at x = 0 for bounded variation paths");
    }
    return refracted_w_pair(spec, coeffs, z).derivative(x, 1);
}

double find_unimodal_minimum_wprime(const ProblemSpec& spec, const ScaleCoefficients& coeffs,
                                    double z) {
    if (!(z > 0.0)) throw DomainError("find_unimodal_minimum_wprime needs z > 0");
    return refracted_w_pair(spec, coeffs, z).argmin_derivative();
}

}  // namespace parisian
