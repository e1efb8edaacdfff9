#include "parisian/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace parisian {

namespace {

constexpr std::array<std::string_view, 10> kKeys{"model", "mu",    "sigma", "p", "lambda",
                                                 "mu_claim", "delta", "q",  "r", "beta"};
constexpr std::array<std::string_view, 2> kBrownianKeys{"mu", "sigma"};
constexpr std::array<std::string_view, 3> kClKeys{"p", "lambda", "mu_claim"};

struct Entry {
    std::string text;
    int line = -1;  // -1 for command-line overrides
};

using Entries = std::map<std::string, Entry, std::less<>>;

bool known(std::string_view key) {
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

void read_yaml(std::string_view text, Entries& entries) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError(e.msg, e.mark.is_null() ? -1 : e.mark.line + 1);
    }
    if (root.IsNull()) return;
    if (!root.IsMap()) throw ConfigError("top level must be a mapping", root.Mark().line + 1);
    for (const auto& kv : root) {
        const int line = kv.first.Mark().line + 1;
        if (!kv.first.IsScalar()) throw ConfigError("keys must be scalars", line);
        const auto key = kv.first.as<std::string>();
        if (!known(key)) throw ConfigError("unknown key '" + key + "'", line);
        if (!kv.second.IsScalar()) {
            throw ConfigError("value of '" + key + "' must be a scalar", kv.second.Mark().line + 1);
        }
        if (entries.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
        entries[key] = Entry{kv.second.as<std::string>(), kv.second.Mark().line + 1};
    }
}

void apply_overrides(std::span<const std::string> overrides, Entries& entries) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("override '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        if (!known(key)) throw ConfigError("unknown key '" + key + "' in override");
        entries[key] = Entry{item.substr(eq + 1), -1};
    }
}

double number(const Entries& entries, std::string_view key) {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing key '" + std::string(key) + "'");
    const std::string& s = it->second.text;
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("value '" + s + "' of '" + std::string(key) + "' is not a number",
                          it->second.line);
    }
    return value;
}

template <std::size_t N>
void reject(const Entries& entries, const std::array<std::string_view, N>& keys,
            std::string_view model) {
    for (auto key : keys) {
        if (const auto it = entries.find(key); it != entries.end()) {
            throw ConfigError("key '" + std::string(key) + "' does not apply to model " +
                                  std::string(model),
                              it->second.line);
        }
    }
}

ProblemSpec build(const Entries& entries) {
    const auto it = entries.find("model");
    if (it == entries.end()) throw ConfigError("missing key 'model'");
    const std::string& name = it->second.text;
    ProblemSpec spec;
    if (name == "brownian") {
        reject(entries, kClKeys, name);
        spec.model = Brownian{number(entries, "mu"), number(entries, "sigma")};
    } else if (name == "cramer-lundberg") {
        reject(entries, kBrownianKeys, name);
        spec.model = CramerLundberg{number(entries, "p"), number(entries, "lambda"),
                                    number(entries, "mu_claim")};
    } else {
        throw ConfigError("model must be 'brownian' or 'cramer-lundberg', got '" + name + "'",
                          it->second.line);
    }
    spec.delta = number(entries, "delta");
    spec.q = number(entries, "q");
    spec.r = number(entries, "r");
    spec.beta = number(entries, "beta");
    validate(spec);
    return spec;
}

}  // namespace

ProblemSpec parse_problem_spec(std::string_view yaml_text, std::span<const std::string> overrides) {
    Entries entries;
    read_yaml(yaml_text, entries);
    apply_overrides(overrides, entries);
    return build(entries);
}

ProblemSpec load_problem_spec(const std::string& path, std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_problem_spec(text.str(), overrides);
}

ProblemSpec problem_spec_from_overrides(std::span<const std::string> overrides) {
    Entries entries;
    apply_overrides(overrides, entries);
    return build(entries);
}

}  // namespace parisian
