#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "parisian/config.hpp"

using namespace parisian;

namespace {

const char* kBrownian = R"(model: brownian
mu: 0.5
sigma: 0.75
delta: 0.05
q: 0.05
r: 3
beta: 0.05
)";

}  // namespace

TEST(Config, ParsesBrownian) {
    const auto spec = parse_problem_spec(kBrownian);
    const auto& b = std::get<Brownian>(spec.model);
    EXPECT_EQ(b.mu, 0.5);
    EXPECT_EQ(b.sigma, 0.75);
    EXPECT_EQ(spec.r, 3.0);
    EXPECT_EQ(spec.beta, 0.05);
}

TEST(Config, OverridesWin) {
    const std::vector<std::string> sets{"beta=1", "mu=0.25"};
    const auto spec = parse_problem_spec(kBrownian, sets);
    EXPECT_EQ(spec.beta, 1.0);
    EXPECT_EQ(std::get<Brownian>(spec.model).mu, 0.25);
}

TEST(Config, UnknownKeyReportsLine) {
    const std::string text = std::string(kBrownian) + "gamma: 2\n";
    try {
        parse_problem_spec(text);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 8);
        EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
    }
}

TEST(Config, BadNumberReportsLine) {
    const std::string text = "model: brownian\nmu: fast\nsigma: 1\ndelta: 0.1\nq: 0.1\nr: 1\nbeta: 1\n";
    try {
        parse_problem_spec(text);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2);
    }
}

TEST(Config, ForeignModelKeyRejected) {
    const std::string text = std::string(kBrownian) + "lambda: 2\n";
    EXPECT_THROW(parse_problem_spec(text), ConfigError);
}

TEST(Config, MissingKeyRejected) {
    EXPECT_THROW(parse_problem_spec("model: brownian\nmu: 1\n"), ConfigError);
}

TEST(Config, BadOverrideRejected) {
    const std::vector<std::string> sets{"nope"};
    EXPECT_THROW(parse_problem_spec(kBrownian, sets), ConfigError);
    const std::vector<std::string> unknown{"zeta=1"};
    EXPECT_THROW(parse_problem_spec(kBrownian, unknown), ConfigError);
}

TEST(Config, InvalidRefractionPropagates) {
    const std::vector<std::string> sets{"model=cramer-lundberg", "p=1", "lambda=1", "mu_claim=1",
                                        "delta=2", "q=0.1", "r=1", "beta=1"};
    EXPECT_THROW(problem_spec_from_overrides(sets), InvalidRefraction);
}

TEST(Config, MalformedYaml) {
    EXPECT_THROW(parse_problem_spec("model: [brownian\n"), ConfigError);
}
