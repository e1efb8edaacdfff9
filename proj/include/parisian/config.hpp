#pragma once

#include <span>
#include <string>
#include <string_view>

#include "parisian/levy_models.hpp"

namespace parisian {

/// Reads a ProblemSpec from YAML with keys model ("brownian" |
/// "cramer-lundberg"), mu, sigma | p, lambda, mu_claim, and delta, q, r, beta.
/// Each override is "key=value" and takes precedence over the file. Unknown
/// keys, keys of the other model and unparsable values raise ConfigError
/// (with the YAML line when there is one); the assembled spec is validated.
ProblemSpec parse_problem_spec(std::string_view yaml_text,
                               std::span<const std::string> overrides = {});

ProblemSpec load_problem_spec(const std::string& path,
                              std::span<const std::string> overrides = {});

/// Spec with no file at all: every key comes from the overrides.
ProblemSpec problem_spec_from_overrides(std::span<const std::string> overrides);

}  // namespace parisian
