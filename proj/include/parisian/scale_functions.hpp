#pragma once

#include "parisian/levy_models.hpp"

namespace parisian {

enum class Process { X, Y };

/// q-scale function W^(q) of X, or of the drift-adjusted Y.
struct ScaleFunction {
    ExpPair pair;
    double q = 0.0;

    static ScaleFunction of(const ScaleCoefficients& coeffs, Process which);
};

/// 0 for x < 0.
double W(const ScaleFunction& sf, double x);
/// Right derivative; 0 for x < 0 and the 0+ limit at x = 0.
double W_prime(const ScaleFunction& sf, double x);
/// 1 + q int_0^x W.
double Z(const ScaleFunction& sf, double x);

/// Refracted scale function w^(q)(x; -z), z >= 0.
double refracted_w(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x, double z);

/// d/dx w^(q)(x; -z). Throws UndefinedDerivative at x = 0 for Cramér–Lundberg.
double refracted_w_prime(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x,
                         double z);

/// x -> w^(q)(x; -z) on [0, inf) as A e^{k+ x} - B e^{k- x}.
ExpPair refracted_w_pair(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double z);

/// a*_R: w'(.; -z) decreases on (0, a*_R) and increases afterwards.
double find_unimodal_minimum_wprime(const ProblemSpec& spec, const ScaleCoefficients& coeffs,
                                    double z);

}  // namespace parisian
