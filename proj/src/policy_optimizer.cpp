#include "parisian/policy_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "parisian/errors.hpp"

namespace parisian {

void validate(const ImpulsePolicy& policy) {
    if (!(policy.beta > 0.0)) throw DomainError("beta must be positive");
    if (!(policy.c1 >= 0.0)) throw DomainError("c1 must be nonnegative");
    if (!(policy.c2 > policy.c1 + policy.beta)) throw DomainError("policy needs c2 > c1 + beta");
}

std::string_view to_string(OptimumCase kind) {
    return kind == OptimumCase::Interior ? "interior" : "boundary";
}

double g(const ParisianScale& ps, double c1, double c2, double beta) {
    validate(ImpulsePolicy{c1, c2, beta});
    const ExpPair& v = ps.positive_branch();
    return (v.value(c2) - v.value(c1)) / (c2 - c1 - beta);
}

namespace {

using boost::math::tools::eps_tolerance;
using boost::math::tools::toms748_solve;

constexpr int kRootDigits = 50;  // eps_tolerance clamps to the type's precision

template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi) {
    std::uintmax_t iters = 200;
    auto [a, b] = toms748_solve(f, lo, hi, flo, fhi, eps_tolerance<double>(kRootDigits), iters);
    return 0.5 * (a + b);
}

/// Smallest x >= from with V'(x) = level, V' increasing on [from, inf).
double rising_crossing(const ExpPair& v, double from, double level) {
    auto f = [&](double x) { return v.derivative(x) - level; };
    double lo = from;
    double flo = f(lo);
    if (flo >= 0.0) return lo;
    double step = 1.0;
    double hi = lo + step;
    double fhi = f(hi);
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        step *= 2.0;
        hi = lo + step;
        if (hi > 1e6) throw SolverFailure("V' does not reach the requested level", {}, 0.0);
        fhi = f(hi);
    }
    return bracketed_root(f, lo, hi, flo, fhi);
}

/// c1 in [0, a*] with V'(c1) = level, V' decreasing there.
double falling_crossing(const ExpPair& v, double a_star, double level) {
    auto f = [&](double x) { return v.derivative(x) - level; };
    const double f0 = f(0.0);
    const double fa = f(a_star);
    if (f0 <= 0.0) return 0.0;
    if (fa >= 0.0) return a_star;
    return bracketed_root(f, 0.0, a_star, f0, fa);
}

struct Candidate {
    double c1 = 0.0;
    double c2 = 0.0;
    double g = std::numeric_limits<double>::infinity();
    double fo = std::numeric_limits<double>::infinity();
    double interior = 0.0;
    bool valid = false;
};

Candidate evaluate(const ExpPair& v, double c1, double c2, double beta, bool interior) {
    Candidate c;
    c.c1 = c1;
    c.c2 = c2;
    const double gap = c2 - c1 - beta;
    if (!(c1 >= 0.0) || !(gap > 0.0)) return c;
    c.g = (v.value(c2) - v.value(c1)) / gap;
    const double d2 = v.derivative(c2);
    c.fo = std::abs(d2 - c.g) / c.g;
    c.interior = interior ? std::abs(v.derivative(c1) - d2) / d2 : 0.0;
    c.valid = true;
    return c;
}

/// c1 = 0 and V'(c2)(c2 - beta) = V(c2) - V(0), safeguarded Newton on c2.
Candidate solve_boundary(const ExpPair& v, double a_star, double beta, double box_max,
                         double guess, int max_iter) {
    const double lo = std::max(a_star, beta);
    auto f = [&](double c2) { return v.derivative(c2) * (c2 - beta) - (v.value(c2) - v.value(0.0)); };
    const double flo = f(lo);
    double hi = std::max(box_max, lo + 1.0);
    while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e6) return {};
    }
    double c2 = lo;
    if (flo < 0.0) {
        guess = std::clamp(guess, lo, hi);
        std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
        auto fdf = [&](double x) {
            return std::make_pair(f(x), v.derivative(x, 2) * (x - beta));
        };
        c2 = boost::math::tools::newton_raphson_iterate(fdf, guess, lo, hi,
                                                        std::numeric_limits<double>::digits - 2,
                                                        iters);
    }
    return evaluate(v, 0.0, c2, beta, false);
}

/// Damped Newton on (V'(c1) - V'(c2), V'(c2)(c2 - c1 - beta) - (V(c2) - V(c1))).
Candidate newton_interior(const ExpPair& v, double c1, double c2, double beta, int max_iter,
                          double tol) {
    auto residual = [&](double a, double b) {
        const double gap = b - a - beta;
        const double d1 = v.derivative(a);
        const double d2 = v.derivative(b);
        return std::pair{d1 - d2, d2 * gap - (v.value(b) - v.value(a))};
    };
    auto norm = [](std::pair<double, double> r) { return std::hypot(r.first, r.second); };
    auto r = residual(c1, c2);
    for (int it = 0; it < max_iter; ++it) {
        const Candidate now = evaluate(v, c1, c2, beta, true);
        if (now.valid && now.fo <= tol && now.interior <= tol) return now;
        const double gap = c2 - c1 - beta;
        const double j11 = v.derivative(c1, 2);
        const double j12 = -v.derivative(c2, 2);
        const double j21 = v.derivative(c1) - v.derivative(c2);
        const double j22 = v.derivative(c2, 2) * gap;
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
        const double s1 = -(j22 * r.first - j12 * r.second) / det;
        const double s2 = -(-j21 * r.first + j11 * r.second) / det;
        double t = 1.0;
        bool moved = false;
        for (int k = 0; k < 40; ++k, t *= 0.5) {
            const double n1 = c1 + t * s1;
            const double n2 = c2 + t * s2;
            if (n1 < 0.0 || !(n2 - n1 - beta > 0.0)) continue;
            const auto rn = residual(n1, n2);
            if (norm(rn) < norm(r)) {
                c1 = n1;
                c2 = n2;
                r = rn;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return evaluate(v, c1, c2, beta, true);
}

/// Reduces the interior system to c2 alone: c1(c2) solves V'(c1) = V'(c2) on
/// [0, a*], and V'(c2)(c2 - c1 - beta) - (V(c2) - V(c1)) increases in c2.
Candidate bracket_interior(const ExpPair& v, double a_star, double beta) {
    const double top = v.derivative(0.0);
    if (!(a_star > 0.0) || !(top > v.derivative(a_star))) return {};
    const double c2_hi = rising_crossing(v, a_star, top);
    auto h = [&](double c2) {
        const double c1 = falling_crossing(v, a_star, v.derivative(c2));
        return v.derivative(c2) * (c2 - c1 - beta) - (v.value(c2) - v.value(c1));
    };
    const double h_lo = h(a_star);
    const double h_hi = h(c2_hi);
    if (!(h_lo < 0.0) || !(h_hi > 0.0)) return {};
    const double c2 = bracketed_root(h, a_star, c2_hi, h_lo, h_hi);
    const double c1 = falling_crossing(v, a_star, v.derivative(c2));
    if (!(c1 > 0.0)) return {};
    return evaluate(v, c1, c2, beta, true);
}

bool acceptable(const Candidate& c, double tol) {
    return c.valid && c.fo <= tol && c.interior <= tol;
}

}  // namespace

OptimalPolicyResult find_optimal_policy(const ParisianScale& ps, double beta,
                                        const OptimizerOptions& opts) {
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    const ExpPair& v = ps.positive_branch();
    const double a_star = ps.argmin_derivative();
    const double floor_slope = v.derivative(a_star);

    // The optimum has V'(c2*) = g* <= g at any feasible point and c2* >= a*,
    // so the crossing of that g bounds c2*; the 10x rule usually dominates.
    const double ref_c2 = a_star + beta + 1.0;
    const double g_ref = (v.value(ref_c2) - v.value(0.0)) / (ref_c2 - beta);
    const double box_max = std::max({rising_crossing(v, a_star, 10.0 * floor_slope),
                                     rising_crossing(v, a_star, g_ref), ref_c2});

    const auto xs = kernels::linspace(0.0, box_max, std::max<std::size_t>(opts.coarse_points, 3));
    const auto vs = kernels::evaluate_V(ps, xs, opts.exec);
    const auto grid = kernels::min_g_on_grid(xs, vs, beta, opts.exec);
    if (!grid.found) throw SolverFailure("coarse grid holds no feasible pair", {}, 0.0);
    const ImpulsePolicy grid_policy{xs[grid.i], xs[grid.j], beta};

    Candidate boundary =
        solve_boundary(v, a_star, beta, box_max, grid_policy.c2, opts.max_iterations);

    Candidate interior;
    if (grid_policy.c1 > 0.0) {
        interior = newton_interior(v, grid_policy.c1, grid_policy.c2, beta, opts.max_iterations,
                                   opts.residual_tol);
    }
    if (!acceptable(interior, opts.residual_tol) || !(interior.c1 > 0.0)) {
        interior = bracket_interior(v, a_star, beta);
        if (interior.valid && !acceptable(interior, opts.residual_tol)) {
            interior = newton_interior(v, interior.c1, interior.c2, beta, opts.max_iterations,
                                       opts.residual_tol);
        }
    }

    const bool boundary_ok = acceptable(boundary, opts.residual_tol);
    const bool interior_ok = acceptable(interior, opts.residual_tol) && interior.c1 > 0.0;
    if (!boundary_ok && !interior_ok) {
        throw SolverFailure("no stationary point met the residual tolerance", grid_policy, grid.g);
    }

    const bool pick_interior =
        interior_ok && (!boundary_ok || interior.g < boundary.g - opts.tie_tol);
    const Candidate& best = pick_interior ? interior : boundary;

    OptimalPolicyResult out;
    out.policy = ImpulsePolicy{best.c1, best.c2, beta};
    out.g_value = best.g;
    out.kind = pick_interior ? OptimumCase::Interior : OptimumCase::Boundary;
    out.fo_residual = best.fo;
    out.interior_residual = best.interior;
    out.a_star = a_star;
    out.box_max = box_max;
    out.converged = true;
    out.optimality_certified = check_sufficiency(ps, out, default_sufficiency_grid(out));
    return out;
}

double value_function(const ParisianScale& ps, const ImpulsePolicy& policy, double x) {
    validate(policy);
    const double v1 = ps.value(policy.c1);
    const double v2 = ps.value(policy.c2);
    const double net = policy.c2 - policy.c1 - policy.beta;
    if (x <= policy.c2) return net * ps.value(x) / (v2 - v1);
    return x - policy.c1 - policy.beta + net * v1 / (v2 - v1);
}

ValueFunctionEval evaluate_value_function(const ParisianScale& ps, const ImpulsePolicy& policy,
                                          std::span<const double> grid) {
    ValueFunctionEval out{policy, {grid.begin(), grid.end()}, {}};
    out.values.reserve(grid.size());
    for (double x : grid) out.values.push_back(value_function(ps, policy, x));
    return out;
}

TransferCheck check_transfer_inequality(const ParisianScale& ps, const OptimalPolicyResult& result,
                                        std::span<const double> grid, double tol) {
    const auto eval = evaluate_value_function(ps, result.policy, grid);
    const double beta = result.policy.beta;
    TransferCheck out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double x = grid[i];
            const double y = grid[j];
            if (x < y || y < 0.0) continue;
            const double margin = eval.values[i] - eval.values[j] - (x - y - beta);
            if (margin < out.worst_margin) {
                out.worst_margin = margin;
                out.worst_x = x;
                out.worst_y = y;
            }
        }
    }
    out.passed = out.worst_margin >= -tol;
    return out;
}

std::vector<double> default_transfer_grid(const OptimalPolicyResult& result) {
    return kernels::linspace(0.0, 2.0 * result.policy.c2, 200);
}

bool check_sufficiency(const ParisianScale& ps, const OptimalPolicyResult& result,
                       std::span<const double> grid, double tol) {
    const ExpPair& v = ps.positive_branch();
    double running_max = -std::numeric_limits<double>::infinity();
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());
    for (double x : sorted) {
        if (x < result.policy.c2) continue;
        const double d = v.derivative(x);
        if (running_max > d + tol * std::max(1.0, std::abs(d))) return false;
        running_max = std::max(running_max, d);
    }
    return true;
}

std::vector<double> default_sufficiency_grid(const OptimalPolicyResult& result) {
    const double c2 = result.policy.c2;
    return kernels::linspace(c2, c2 + std::max(c2, 10.0), 400);
}

UnimodalityCheck certify_unimodal(const ParisianScale& ps, std::span<const double> grid) {
    UnimodalityCheck out;
    if (grid.size() < 3) throw DomainError("unimodality check needs at least 3 points");
    std::vector<double> d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) d[i] = ps.derivative(grid[i]);
    out.grid_argmin = grid[static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin())];
    int last_sign = 0;
    int first_sign = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double diff = d[i] - d[i - 1];
        const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (first_sign == 0) first_sign = sign;
        if (last_sign != 0 && sign != last_sign) ++out.turns;
        last_sign = sign;
    }
    out.passed = out.turns == 0 || (out.turns == 1 && first_sign < 0);
    return out;
}

double generator_residual(const ParisianScale& ps, const std::function<double(double)>& f,
                          double x, std::span<const double> kinks, double h) {
    for (double k : kinks) {
        if (std::abs(x - k) < h) {
            throw DomainError("generator residual evaluated within h of a singular point");
        }
    }
    const ProblemSpec& spec = ps.spec();
    const double fx = f(x);
    const double fp = f(x + h);
    const double fm = f(x - h);
    const double d1 = (fp - fm) / (2.0 * h);
    const double refraction = x > 0.0 ? spec.delta : 0.0;

    if (const auto* b = std::get_if<Brownian>(&spec.model)) {
        const double d2 = (fp - 2.0 * fx + fm) / (h * h);
        return (b->mu - refraction) * d1 + 0.5 * b->sigma * b->sigma * d2 - spec.q * fx;
    }

    const auto& cl = std::get<CramerLundberg>(spec.model);
    const double mu = cl.mu_claim;
    // f(x - z) is smooth in z between the images of the kinks.
    std::vector<double> cuts{0.0};
    double lowest = x;
    for (double k : kinks) {
        if (k < x) cuts.push_back(x - k);
        lowest = std::min(lowest, k);
    }
    const double z_max = (x - lowest) + 40.0 / mu;
    cuts.push_back(z_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    QuadratureOptions qopts;
    qopts.rel_tol = 1e-12;
    qopts.abs_tol = 1e-14;
    auto integrand = [&](double z) { return f(x - z) * mu * std::exp(-mu * z); };
    double jump = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        jump += integrate(integrand, cuts[i - 1], cuts[i], qopts);
    }
    // the mass beyond z_max is below e^{-40}
    jump -= fx;
    return (cl.p - refraction) * d1 + cl.lambda * jump - spec.q * fx;
}

double generator_residual(const ParisianScale& ps, const OptimalPolicyResult& result, double x,
                          double h) {
    const ImpulsePolicy policy = result.policy;
    std::vector<double> kinks{0.0, policy.c2};
    if (!is_brownian(ps.spec())) kinks.push_back(ps.support_start());
    return generator_residual(
        ps, [&](double y) { return value_function(ps, policy, y); }, x, kinks, h);
}

}  // namespace parisian
