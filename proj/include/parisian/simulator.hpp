#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "parisian/kernels.hpp"
#include "parisian/levy_models.hpp"
#include "parisian/policy_optimizer.hpp"

namespace parisian {

struct SimulationConfig {
    std::size_t paths = 100000;
    double dt = 0.0;       ///< Euler step; 0 selects default_dt
    double horizon = 0.0;  ///< time cap; 0 selects the functional's default
    std::uint64_t seed = 42;
    bool antithetic = false;
    Execution exec = Execution::Parallel;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample std / sqrt(n_effective)
    std::size_t n_effective = 0;
    double elapsed_seconds = 0.0;
    std::size_t censored = 0;
    std::string warning;  ///< empty unless censoring may bias the mean
};

/// 1e-3 * min(r, 1).
double default_dt(const ProblemSpec& spec);
/// 50 r.
double default_exit_horizon(const ProblemSpec& spec);
/// max(50 r, 30 / q): long enough that e^{-q T} is negligible.
double default_npv_horizon(const ProblemSpec& spec);

/// Independent substream for path `index`, seeded through splitmix64. The
/// mirrored twin returns -Z for normals and uses 1 - U for exponentials.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t index, bool mirrored = false);

    double normal();
    double exponential(double rate);

private:
    double open_uniform();

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    bool mirrored_;
};

enum class StopReason { Upper, ParisianRuin, Censored };

struct StoppingRule {
    /// Stop as soon as the state is >= upper (ignored under a policy).
    double upper = std::numeric_limits<double>::infinity();
    /// Pay the state down to c1 whenever it is >= c2; runs until ruin or horizon.
    std::optional<ImpulsePolicy> policy;
};

struct PathOutcome {
    double state = 0.0;
    double time = 0.0;
    StopReason reason = StopReason::Censored;
    /// e^{-q tau} at Upper for the exit rule; sum of e^{-q t}(payment - beta) under a policy.
    double discounted_payoff = 0.0;
    std::size_t payments = 0;
};

/// Called with (t, state) after every Euler step or flow segment.
using PathObserver = std::function<void(double, double)>;

/// Brownian: Euler with drift mu - delta 1{R > 0}, Parisian clock per step.
/// Cramér–Lundberg: exact piecewise-linear flow between claim epochs.
/// Under a policy the refraction applies to the controlled state.
PathOutcome simulate_refracted_path(const ProblemSpec& spec, double x0, const StoppingRule& rule,
                                    double dt, double horizon, RandomStream& rng,
                                    const PathObserver& observe = {});

/// First sample time t with U_t < 0 and t - (last sample time with U >= 0) >= r.
/// Before the first nonnegative sample the excursion is counted from times[0].
std::optional<double> parisian_clock(std::span<const double> times, std::span<const double> values,
                                     double r);

/// E_x[e^{-q kappa_a^+} 1{kappa_a^+ < kappa^r}]; censored paths contribute 0.
MonteCarloEstimate estimate_exit_functional(const ProblemSpec& spec, double x, double a,
                                            const SimulationConfig& config);

/// Discounted net dividends of the (c1, c2) impulse strategy started at x.
MonteCarloEstimate estimate_policy_npv(const ProblemSpec& spec, const ImpulsePolicy& policy,
                                       double x, const SimulationConfig& config);

}  // namespace parisian
