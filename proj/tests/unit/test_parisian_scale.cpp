#include <cmath>

#include <gtest/gtest.h>

#include "parisian/parisian_scale.hpp"
#include "parisian/quadrature.hpp"
#include "parisian/special.hpp"

using namespace parisian;

namespace {

ProblemSpec bm_spec() { return ProblemSpec{Brownian{0.5, 0.75}, 0.05, 0.05, 3.0, 0.05}; }
ProblemSpec cl_spec() { return ProblemSpec{CramerLundberg{3.0, 2.0, 1.0}, 0.25, 0.05, 2.0, 1.0}; }

}  // namespace

TEST(ParisianScale, ValueAtZeroIsExpQr) {
    for (const auto& spec : {bm_spec(), cl_spec()}) {
        const ParisianScale ps(spec);
        const double e = std::exp(spec.q * spec.r);
        EXPECT_NEAR(ps.value(0.0), e, 1e-12 * e);
    }
}

TEST(ParisianScale, BrownianMatchesQuadratureAcrossRegions) {
    const ParisianScale ps(bm_spec());
    for (double x : {-4.0, -2.0, -0.7, -0.01, 0.0, 0.01, 0.8, 2.5, 6.0, 10.0}) {
        const double q = V_quadrature_oracle(ps, x);
        EXPECT_NEAR(ps.value(x), q, 1e-10 * q) << "x=" << x;
    }
}

TEST(ParisianScale, ClMatchesQuadratureAcrossRegions) {
    const ParisianScale ps(cl_spec());
    for (double x : {-5.99, -5.0, -3.0, -1.0, -0.01, 0.0, 0.01, 1.0, 4.0, 8.0}) {
        const double q = V_quadrature_oracle(ps, x);
        EXPECT_NEAR(ps.value(x), q, 1e-10 * q) << "x=" << x;
    }
}

TEST(ParisianScale, ClVanishesBelowMinusPr) {
    const ParisianScale ps(cl_spec());
    EXPECT_DOUBLE_EQ(ps.support_start(), -6.0);
    EXPECT_EQ(ps.value(-6.0001), 0.0);
    EXPECT_EQ(ps.value(-20.0), 0.0);
    EXPECT_EQ(V_quadrature_oracle(ps, -6.5), 0.0);
}

// Only the no-claim atom reaches x = -pr: e^{-lambda r} p W(0) = e^{-lambda r}.
TEST(ParisianScale, ClJumpAtMinusPrIsTheAtom) {
    const ParisianScale ps(cl_spec());
    EXPECT_NEAR(ps.value(-6.0), std::exp(-4.0), 1e-13);
}

TEST(ParisianScale, ClConstantMatchesDerivativeMoment) {
    const ParisianScale ps(cl_spec());
    EXPECT_NEAR(constant_C(ps), 0.121275151374, 1e-11);
    EXPECT_DOUBLE_EQ(constant_C(ps), ps.derivative_moment());
    EXPECT_THROW(constant_C(ParisianScale(bm_spec())), DomainError);
}

TEST(ParisianScale, DerivativeMatchesDifferences) {
    for (const auto& spec : {bm_spec(), cl_spec()}) {
        const ParisianScale ps(spec);
        const double h = 1e-5;
        for (double x : {-2.5, -0.4, 0.3, 1.2, 4.0}) {
            const double fd = (ps.value(x + h) - ps.value(x - h)) / (2 * h);
            EXPECT_NEAR(ps.derivative(x), fd, 1e-7 * std::max(1.0, std::abs(fd))) << "x=" << x;
        }
    }
}

TEST(ParisianScale, BrownianDerivativeContinuousAtZero) {
    const ParisianScale ps(bm_spec());
    EXPECT_NEAR(ps.derivative(-1e-9), ps.derivative(0.0), 1e-7);
}

TEST(ParisianScale, ClDerivativeUndefinedAtSingularPoints) {
    const ParisianScale ps(cl_spec());
    EXPECT_THROW(ps.derivative(0.0), UndefinedDerivative);
    EXPECT_THROW(ps.derivative(-6.0), UndefinedDerivative);
    EXPECT_NO_THROW(ps.derivative(1e-9));
}

TEST(ParisianScale, IncreasingOnSupport) {
    for (const auto& spec : {bm_spec(), cl_spec()}) {
        const ParisianScale ps(spec);
        double prev = ps.value(std::max(ps.support_start(), -6.0));
        for (double x = -5.9; x < 12.0; x += 0.1) {
            const double v = ps.value(x);
            EXPECT_GT(v, prev) << "x=" << x;
            prev = v;
        }
    }
}

TEST(CompoundPoisson, AtomPlusDensityIsOne) {
    const CompoundPoissonLaw law{2.0, 1.0, 2.0};
    const double mass = integrate([&](double y) { return compound_density(law, y); }, 0.0, 80.0);
    EXPECT_NEAR(law.atom() + mass, 1.0, 1e-12);
}

TEST(CompoundPoisson, MeanIsLambdaROverMu) {
    const CompoundPoissonLaw law{2.0, 1.5, 2.0};
    const double mean = integrate([&](double y) { return y * compound_density(law, y); }, 0.0, 80.0);
    EXPECT_NEAR(mean, 2.0 * 2.0 / 1.5, 1e-11);
}
