#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "parisian/levy_models.hpp"

namespace parisian {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    bool with_mc = false;
    std::size_t paths = 100000;
    std::uint64_t seed = 42;
    double dt = 0.0;  ///< 0 selects the simulator default
};

/// Runs the invariant suite for one problem: root identities, closed form
/// against quadrature, V(0) = e^{qr}, unimodality of V', optimizer residuals,
/// transfer inequality, sufficiency, generator residuals and, on request,
/// Monte Carlo comparisons. Numerical failures inside a check are reported as
/// a failed check rather than thrown.
std::vector<CheckResult> run_verification(const ProblemSpec& spec, const VerifyOptions& opts = {});

}  // namespace parisian
