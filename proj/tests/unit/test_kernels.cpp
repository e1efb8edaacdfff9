#include <cmath>

#include <gtest/gtest.h>

#include "parisian/kernels.hpp"

using namespace parisian;

namespace {

ProblemSpec cl_spec() { return ProblemSpec{CramerLundberg{3.0, 2.0, 1.0}, 0.25, 0.05, 2.0, 1.0}; }

}  // namespace

TEST(Kernels, LinspaceEndpoints) {
    const auto xs = kernels::linspace(-1.0, 2.0, 4);
    EXPECT_EQ(xs.front(), -1.0);
    EXPECT_EQ(xs.back(), 2.0);
    EXPECT_DOUBLE_EQ(xs[1], 0.0);
    EXPECT_THROW(kernels::linspace(0.0, 1.0, 1), DomainError);
}

TEST(Kernels, ParallelMatchesSerialBitwise) {
    const ParisianScale ps(cl_spec());
    const auto xs = kernels::linspace(-7.0, 15.0, 3001);
    const auto vp = kernels::evaluate_V(ps, xs, Execution::Parallel);
    const auto vs = kernels::evaluate_V(ps, xs, Execution::Serial);
    EXPECT_EQ(vp, vs);
    const auto dp = kernels::evaluate_V_prime(ps, xs, Execution::Parallel);
    const auto ds = kernels::evaluate_V_prime(ps, xs, Execution::Serial);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(ds[i])) {
            EXPECT_TRUE(std::isnan(dp[i]));
        } else {
            EXPECT_EQ(dp[i], ds[i]);
        }
    }
    const auto grid = kernels::linspace(0.0, 15.0, 1500);
    const auto vg = kernels::evaluate_V(ps, grid);
    const auto a = kernels::min_g_on_grid(grid, vg, 1.0, Execution::Parallel);
    const auto b = kernels::min_g_on_grid(grid, vg, 1.0, Execution::Serial);
    EXPECT_EQ(a.i, b.i);
    EXPECT_EQ(a.j, b.j);
    EXPECT_EQ(a.g, b.g);
}

TEST(Kernels, DerivativeNanAtClSingularities) {
    const ParisianScale ps(cl_spec());
    const std::vector<double> xs{-6.0, 0.0, 1.0};
    const auto d = kernels::evaluate_V_prime(ps, xs);
    EXPECT_TRUE(std::isnan(d[0]));
    EXPECT_TRUE(std::isnan(d[1]));
    EXPECT_FALSE(std::isnan(d[2]));
}

TEST(Kernels, GridTiesPickSmallestIndex) {
    const std::vector<double> xs{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> vs{0.0, 1.0, 2.0, 3.0};
    const auto m = kernels::min_g_on_grid(xs, vs, 0.5);
    EXPECT_TRUE(m.found);
    EXPECT_EQ(m.i, 0u);
    EXPECT_EQ(m.j, 3u);
}
