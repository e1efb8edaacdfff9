#include "parisian/simulator.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "parisian/errors.hpp"

namespace parisian {

double default_dt(const ProblemSpec& spec) { return 1e-3 * std::min(spec.r, 1.0); }

double default_exit_horizon(const ProblemSpec& spec) { return 50.0 * spec.r; }

double default_npv_horizon(const ProblemSpec& spec) {
    return std::max(50.0 * spec.r, 30.0 / spec.q);
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index, bool mirrored)
    : engine_(splitmix64(seed ^ splitmix64(index))), mirrored_(mirrored) {}

double RandomStream::normal() {
    const double z = normal_(engine_);
    return mirrored_ ? -z : z;
}

double RandomStream::open_uniform() {
    // (k + 1/2) / 2^53 lies in (0, 1) and maps onto itself under u -> 1 - u.
    const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return mirrored_ ? 1.0 - u : u;
}

double RandomStream::exponential(double rate) { return -std::log(open_uniform()) / rate; }

namespace {

struct PathState {
    const ProblemSpec& spec;
    const StoppingRule& rule;
    PathOutcome out;

    bool controlled() const { return rule.policy.has_value(); }

    double target() const { return controlled() ? rule.policy->c2 : rule.upper; }

    /// Pays the state down to c1 at time t; returns the new state.
    double pay(double state, double t) {
        const ImpulsePolicy& p = *rule.policy;
        const double amount = state - p.c1;
        const double after = state - amount;
        if (after < 0.0) throw Error("payment would drive the surplus below 0");
        out.discounted_payoff += std::exp(-spec.q * t) * (amount - p.beta);
        ++out.payments;
        return after;
    }

    PathOutcome finish(double state, double t, StopReason reason) {
        out.state = state;
        out.time = t;
        out.reason = reason;
        if (reason == StopReason::Upper && !controlled()) out.discounted_payoff = std::exp(-spec.q * t);
        return out;
    }
};

PathOutcome simulate_brownian(const ProblemSpec& spec, const Brownian& model, double x0,
                              const StoppingRule& rule, double dt, double horizon,
                              RandomStream& rng, const PathObserver& observe) {
    PathState st{spec, rule, {}};
    double R = x0;
    if (R >= st.target()) {
        if (!st.controlled()) return st.finish(R, 0.0, StopReason::Upper);
        R = st.pay(R, 0.0);
    }
    const double sqrt_dt = std::sqrt(dt);
    const auto steps = static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-9));
    const auto ruin_steps = static_cast<std::int64_t>(std::ceil(spec.r / dt - 1e-9));
    std::int64_t last_nonneg = 0;
    for (std::int64_t k = 1; k <= steps; ++k) {
        const double drift = R > 0.0 ? model.mu - spec.delta : model.mu;
        R += drift * dt + model.sigma * sqrt_dt * rng.normal();
        const double t = static_cast<double>(k) * dt;
        if (observe) observe(t, R);
        if (!st.controlled() && R >= rule.upper) return st.finish(R, t, StopReason::Upper);
        if (R >= 0.0) {
            last_nonneg = k;
            if (st.controlled() && R >= rule.policy->c2) R = st.pay(R, t);
        } else if (k - last_nonneg >= ruin_steps) {
            return st.finish(R, t, StopReason::ParisianRuin);
        }
    }
    return st.finish(R, static_cast<double>(steps) * dt, StopReason::Censored);
}

PathOutcome simulate_cramer_lundberg(const ProblemSpec& spec, const CramerLundberg& model,
                                     double x0, const StoppingRule& rule, double horizon,
                                     RandomStream& rng, const PathObserver& observe) {
    PathState st{spec, rule, {}};
    const double up = model.p - spec.delta;
    const double down = model.p;
    const double target = st.target();
    const bool controlled = st.controlled();
    double R = x0;
    double t = 0.0;
    double excursion_start = 0.0;
    if (R >= target) {
        if (!controlled) return st.finish(R, 0.0, StopReason::Upper);
        R = st.pay(R, 0.0);
    }
    double next_claim = rng.exponential(model.lambda);
    auto flow = [&](double until) {
        R += (R < 0.0 ? down : up) * (until - t);
        t = until;
    };
    auto claim = [&] {
        flow(next_claim);
        R -= rng.exponential(model.mu_claim);
        if (observe) observe(t, R);
        next_claim = t + rng.exponential(model.lambda);
    };
    for (;;) {
        if (R < 0.0) {
            const double t_zero = t - R / down;
            const double t_ruin = excursion_start + spec.r;
            const double t_hit = (!controlled && target <= 0.0)
                                     ? t + (target - R) / down
                                     : std::numeric_limits<double>::infinity();
            const double first = std::min({t_zero, t_ruin, t_hit, next_claim});
            if (first > horizon) {
                flow(horizon);
                return st.finish(R, t, StopReason::Censored);
            }
            if (t_hit < t_ruin && t_hit <= next_claim) {
                t = t_hit;
                return st.finish(target, t, StopReason::Upper);
            }
            if (t_ruin < t_zero && t_ruin <= next_claim) {
                flow(t_ruin);
                return st.finish(R, t, StopReason::ParisianRuin);
            }
            if (t_zero <= next_claim) {
                t = t_zero;
                R = 0.0;
                if (observe) observe(t, R);
                continue;
            }
            claim();
            continue;
        }
        const double t_hit = t + (target - R) / up;
        if (t_hit <= next_claim) {
            if (t_hit > horizon) {
                flow(horizon);
                return st.finish(R, t, StopReason::Censored);
            }
            t = t_hit;
            R = target;
            if (observe) observe(t, R);
            if (!controlled) return st.finish(R, t, StopReason::Upper);
            R = st.pay(R, t);
            continue;
        }
        if (next_claim > horizon) {
            flow(horizon);
            return st.finish(R, t, StopReason::Censored);
        }
        claim();
        if (R < 0.0) excursion_start = t;
    }
}

void check_config(const SimulationConfig& c, double dt, double horizon, double r) {
    if (c.paths < 1 || (c.antithetic && c.paths < 2)) {
        throw InvalidParameter("path count must be >= 1 (>= 2 with antithetics)");
    }
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    if (!(horizon > r)) throw InvalidParameter("horizon must exceed r");
}

struct UnitResult {
    double value = 0.0;
    int censored = 0;
};

template <class PathFn>
MonteCarloEstimate aggregate(const SimulationConfig& config, PathFn&& path) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t units = config.antithetic ? config.paths / 2 : config.paths;
    std::vector<UnitResult> results(units);
    auto run_unit = [&](std::size_t i) {
        const PathOutcome a = path(i, false);
        UnitResult u{a.discounted_payoff, a.reason == StopReason::Censored ? 1 : 0};
        if (config.antithetic) {
            const PathOutcome b = path(i, true);
            u.value = 0.5 * (u.value + b.discounted_payoff);
            u.censored += b.reason == StopReason::Censored ? 1 : 0;
        }
        results[i] = u;
    };
    const auto n = static_cast<std::ptrdiff_t>(units);
    if (config.exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) run_unit(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::ptrdiff_t i = 0; i < n; ++i) run_unit(static_cast<std::size_t>(i));
    }

    // Fixed index order keeps the sums independent of the thread schedule.
    MonteCarloEstimate est;
    est.n_effective = units;
    double sum = 0.0;
    for (const auto& u : results) {
        sum += u.value;
        est.censored += static_cast<std::size_t>(u.censored);
    }
    est.mean = sum / static_cast<double>(units);
    double ss = 0.0;
    for (const auto& u : results) ss += (u.value - est.mean) * (u.value - est.mean);
    const double var = units > 1 ? ss / static_cast<double>(units - 1) : 0.0;
    est.std_error = std::sqrt(var / static_cast<double>(units));
    est.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return est;
}

void attach_censoring_warning(MonteCarloEstimate& est, std::size_t paths, double bias_bound) {
    if (est.censored * 1000 > paths && bias_bound > 1e-9) {
        est.warning = std::to_string(est.censored) + " of " + std::to_string(paths) +
                      " paths hit the horizon cap; bias up to " + std::to_string(bias_bound);
    }
}

}  // namespace

PathOutcome simulate_refracted_path(const ProblemSpec& spec, double x0, const StoppingRule& rule,
                                    double dt, double horizon, RandomStream& rng,
                                    const PathObserver& observe) {
    validate(spec);
    if (rule.policy) validate(*rule.policy);
    if (const auto* b = std::get_if<Brownian>(&spec.model)) {
        if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
        return simulate_brownian(spec, *b, x0, rule, dt, horizon, rng, observe);
    }
    return simulate_cramer_lundberg(spec, std::get<CramerLundberg>(spec.model), x0, rule, horizon,
                                    rng, observe);
}

std::optional<double> parisian_clock(std::span<const double> times, std::span<const double> values,
                                     double r) {
    if (times.size() != values.size()) throw DomainError("times and values differ in length");
    if (times.empty()) return std::nullopt;
    double last_nonneg = times[0];
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] >= 0.0) {
            last_nonneg = times[i];
        } else if (times[i] - last_nonneg >= r) {
            return times[i];
        }
    }
    return std::nullopt;
}

MonteCarloEstimate estimate_exit_functional(const ProblemSpec& spec, double x, double a,
                                            const SimulationConfig& config) {
    validate(spec);
    if (x > a) throw DomainError("exit functional needs x <= a");
    const double dt = config.dt > 0.0 ? config.dt : default_dt(spec);
    const double horizon = config.horizon > 0.0 ? config.horizon : default_exit_horizon(spec);
    check_config(config, dt, horizon, spec.r);
    const StoppingRule rule{a, std::nullopt};
    auto est = aggregate(config, [&](std::size_t i, bool mirrored) {
        RandomStream rng(config.seed, i, mirrored);
        return simulate_refracted_path(spec, x, rule, dt, horizon, rng);
    });
    attach_censoring_warning(est, config.paths, std::exp(-spec.q * horizon));
    return est;
}

MonteCarloEstimate estimate_policy_npv(const ProblemSpec& spec, const ImpulsePolicy& policy,
                                       double x, const SimulationConfig& config) {
    validate(spec);
    validate(policy);
    if (x < 0.0) throw DomainError("policy NPV needs x >= 0");
    const double dt = config.dt > 0.0 ? config.dt : default_dt(spec);
    const double horizon = config.horizon > 0.0 ? config.horizon : default_npv_horizon(spec);
    check_config(config, dt, horizon, spec.r);
    const StoppingRule rule{std::numeric_limits<double>::infinity(), policy};
    auto est = aggregate(config, [&](std::size_t i, bool mirrored) {
        RandomStream rng(config.seed, i, mirrored);
        return simulate_refracted_path(spec, x, rule, dt, horizon, rng);
    });
    // what a path still earns after T is at most e^{-qT} (c2 + drift / q)
    const double drift = std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Brownian>) {
                return std::max(m.mu, 0.0);
            } else {
                return m.p;
            }
        },
        spec.model);
    attach_censoring_warning(est, config.paths,
                             std::exp(-spec.q * horizon) * (policy.c2 + drift / spec.q));
    return est;
}

}  // namespace parisian
