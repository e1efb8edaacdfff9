// Acceptance suite: one PASS/FAIL line per criterion. Oracles live here and
// are computed independently of the library paths they check wherever the
// criterion allows it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/minima.hpp>

#include "parisian/config.hpp"
#include "parisian/parisian_scale.hpp"
#include "parisian/policy_optimizer.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"

using namespace parisian;

namespace {

ProblemSpec load(const std::string& name) {
    return load_problem_spec(std::string(PARISIAN_SOURCE_DIR) + "/configs/" + name);
}

ProblemSpec brownian_fig1() { return load("figure1_brownian.yaml"); }
ProblemSpec brownian_fig2() { return load("figure2_brownian_interior.yaml"); }
ProblemSpec brownian_fig3() { return load("figure3_brownian_boundary.yaml"); }
ProblemSpec cl_fig4() { return load("figure4_cramer_lundberg.yaml"); }
ProblemSpec cl_fig5() { return load("figure5_cramer_lundberg_boundary.yaml"); }

struct Report {
    bool ok = true;
    void sub(bool pass, const std::string& what) {
        ok = ok && pass;
        std::printf("    [%s] %s\n", pass ? "ok" : "FAIL", what.c_str());
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, 1e-13);
}

// Brownian: density of X_r, a normal law.
// Cramér–Lundberg: X_r = pr - S_r, S_r compound Poisson with exponential
// claims; continuous part e^{-lr - m s} sqrt(l r m / s) I_1(2 sqrt(l r m s)).
double v_oracle(const ProblemSpec& spec, const ScaleCoefficients& co, double x) {
    const double r = spec.r;
    if (const auto* b = std::get_if<Brownian>(&spec.model)) {
        const double m = b->mu * r;
        const double s = b->sigma * std::sqrt(r);
        boost::math::normal_distribution<double> law(m, s);
        auto f = [&](double z) { return refracted_w(spec, co, x, z) * (z / r) * boost::math::pdf(law, z); };
        const double hi = std::max(m, 0.0) + 14.0 * s;
        double total = 0.0;
        const int pieces = 8;
        for (int k = 0; k < pieces; ++k) total += adaptive(f, hi * k / pieces, hi * (k + 1) / pieces);
        return total;
    }
    const auto& c = std::get<CramerLundberg>(spec.model);
    const double top = c.p * r;
    if (x < -top) return 0.0;
    const double lr = c.lambda * r;
    auto density = [&](double s) {
        const double arg = 2.0 * std::sqrt(lr * c.mu_claim * s);
        return std::exp(-lr - c.mu_claim * s + arg) * std::sqrt(lr * c.mu_claim / s) *
               boost::math::cyl_bessel_i(1, arg) * std::exp(-arg);
    };
    // w(x; -z) vanishes once x + z < 0, so z runs over [max(0, -x), pr].
    const double z_lo = std::max(0.0, -x);
    auto f = [&](double z) { return refracted_w(spec, co, x, z) * (z / r) * density(top - z); };
    double total = std::exp(-lr) * refracted_w(spec, co, x, top) * (top / r);
    if (z_lo < top) {
        const double mid = 0.5 * (z_lo + top);
        total += adaptive(f, z_lo, mid) + adaptive(f, mid, top);
    }
    return total;
}

// ---------------------------------------------------------------------------

bool criterion1(Report& rep) {
    for (const auto& spec : {brownian_fig1(), cl_fig4()}) {
        const ParisianScale ps(spec);
        const double target = std::exp(spec.q * spec.r);
        const double rel = std::abs(ps.value(0.0) - target) / target;
        rep.sub(rel <= 1e-8, fmt("%s V(0)=%.15g e^{qr}=%.15g rel=%.2e (tol 1e-8)",
                                 std::string(model_name(spec.model)).c_str(), ps.value(0.0), target, rel));
    }
    return rep.ok;
}

bool criterion2(Report& rep) {
    for (const auto& spec : {brownian_fig1(), cl_fig4()}) {
        const ParisianScale ps(spec);
        std::vector<double> xs;
        if (is_brownian(spec)) {
            for (int k = 0; k < 25; ++k) xs.push_back(-4.0 + 10.0 * k / 24.0);
        } else {
            // both sides of -pr, the middle region and the positive half line
            const double pr = -ps.support_start();
            for (int k = 0; k < 25; ++k) xs.push_back(-pr - 1.5 + (pr + 7.5) * k / 24.0);
        }
        double worst = 0.0;
        double worst_x = 0.0;
        for (double x : xs) {
            const double closed = ps.value(x);
            const double oracle = v_oracle(spec, ps.coefficients(), x);
            const double err = oracle == 0.0 ? std::abs(closed) : std::abs(closed - oracle) / std::abs(oracle);
            if (err > worst) {
                worst = err;
                worst_x = x;
            }
        }
        rep.sub(worst <= 1e-6, fmt("%s 25-point grid [%g, %g]: worst rel=%.2e at x=%g (tol 1e-6)",
                                   std::string(model_name(spec.model)).c_str(), xs.front(), xs.back(),
                                   worst, worst_x));
    }
    return rep.ok;
}

bool criterion3(Report& rep) {
    for (const auto& spec : {brownian_fig1(), cl_fig4()}) {
        const auto co = compute_coefficients(spec);
        const auto wx = ScaleFunction::of(co, Process::X);
        const auto wy = ScaleFunction::of(co, Process::Y);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const double x = 0.25 + 0.5 * i;
            for (int j = 0; j < 10; ++j) {
                const double z = 0.5 * j;
                // w(x; -z) = W(x + z) + delta int_0^x W_Y(x - y) W'(y + z) dy
                auto f = [&](double y) { return W(wy, x - y) * W_prime(wx, y + z); };
                const double conv = W(wx, x + z) + spec.delta * adaptive(f, 0.0, x);
                const double closed = refracted_w(spec, co, x, z);
                worst = std::max(worst, std::abs(closed - conv) / std::max(1.0, std::abs(conv)));
            }
        }
        rep.sub(worst <= 1e-8, fmt("%s 10x10 (x,z) grid: worst |diff|/max(1,|w|)=%.2e (tol 1e-8)",
                                   std::string(model_name(spec.model)).c_str(), worst));
    }
    return rep.ok;
}

SimulationConfig mc(std::size_t paths, std::uint64_t seed, double dt = 0.0) {
    SimulationConfig c;
    c.paths = paths;
    c.seed = seed;
    c.dt = dt;
    return c;
}

bool criterion4(Report& rep) {
    const auto spec = cl_fig4();
    const ParisianScale ps(spec);
    for (double x : {0.5, 1.0}) {
        const double target = ps.value(x) / ps.value(3.0);
        const auto e = estimate_exit_functional(spec, x, 3.0, mc(100000, 42));
        const double z = (e.mean - target) / e.std_error;
        rep.sub(std::abs(z) <= 3.0, fmt("CL x=%g a=3: est=%.6f se=%.2e analytic=%.6f z=%.2f", x, e.mean,
                                        e.std_error, target, z));
    }
    const auto bspec = brownian_fig1();
    const ParisianScale bps(bspec);
    const double dt = default_dt(bspec);
    const double target = bps.value(0.5) / bps.value(2.0);
    const auto coarse = estimate_exit_functional(bspec, 0.5, 2.0, mc(100000, 42, dt));
    const auto fine = estimate_exit_functional(bspec, 0.5, 2.0, mc(100000, 43, dt / 2.0));
    const double zr = (coarse.mean - fine.mean) / std::hypot(coarse.std_error, fine.std_error);
    rep.sub(std::abs(zr) <= 3.0, fmt("Brownian x=0.5 a=2 refinement: dt=%g est=%.6f, dt=%g est=%.6f, z=%.2f",
                                     dt, coarse.mean, dt / 2.0, fine.mean, zr));
    std::printf("    [info] Brownian analytic %.6f; z(dt)=%.2f z(dt/2)=%.2f\n", target,
                (coarse.mean - target) / coarse.std_error, (fine.mean - target) / fine.std_error);
    return rep.ok;
}

bool criterion5(Report& rep) {
    for (const auto& spec : {cl_fig4(), cl_fig5()}) {
        const ParisianScale ps(spec);
        const auto res = find_optimal_policy(ps, spec.beta);
        const double vp = ps.positive_branch().derivative(res.policy.c2);
        for (double x : {0.0, 1.0, res.policy.c2 + 1.0}) {
            // below c2 the value is V(x)/V'(c2); above it, one payment to c1 first
            const double target = x < res.policy.c2
                                      ? ps.value(x) / vp
                                      : x - res.policy.c1 - spec.beta + ps.value(res.policy.c1) / vp;
            const auto e = estimate_policy_npv(spec, res.policy, x, mc(100000, 42));
            const double z = (e.mean - target) / e.std_error;
            rep.sub(std::abs(z) <= 3.0, fmt("CL beta=%g (c1,c2)=(%.4f,%.4f) x=%.4f: est=%.6f se=%.2e analytic=%.6f z=%.2f",
                                            spec.beta, res.policy.c1, res.policy.c2, x, e.mean,
                                            e.std_error, target, z));
        }
    }
    return rep.ok;
}

// Exhaustive g over a step-h lattice on [0, hi]^2.
double brute_force_min_g(const ParisianScale& ps, double beta, double hi, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(hi / h)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = ps.value(h * static_cast<double>(i));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double c1 = h * static_cast<double>(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = h * static_cast<double>(j) - c1 - beta;
            if (gap <= 0.0) continue;
            best = std::min(best, (v[j] - v[i]) / gap);
        }
    }
    return best;
}

bool criterion6(Report& rep) {
    struct Case {
        ProblemSpec spec;
        const char* label;
        OptimumCase expected;
    };
    const std::vector<Case> cases{{brownian_fig2(), "Brownian beta=0.05", OptimumCase::Interior},
                                  {brownian_fig3(), "Brownian beta=1", OptimumCase::Boundary},
                                  {cl_fig4(), "CL beta=0.02", OptimumCase::Interior},
                                  {cl_fig5(), "CL beta=1", OptimumCase::Boundary}};
    for (const auto& c : cases) {
        const ParisianScale ps(c.spec);
        const auto res = find_optimal_policy(ps, c.spec.beta);
        const auto& p = res.policy;
        const double gs = (ps.value(p.c2) - ps.value(p.c1)) / (p.c2 - p.c1 - p.beta);
        double fo = std::abs(ps.positive_branch().derivative(p.c2) - gs) / gs;
        if (p.c1 > 0.0) fo = std::max(fo, std::abs(ps.positive_branch().derivative(p.c1) - gs) / gs);
        rep.sub(fo <= 1e-8, fmt("%s first-order residual %.2e (tol 1e-8)", c.label, fo));

        const double hi = std::max(res.box_max, p.c2 + 1.0);
        const double brute = brute_force_min_g(ps, p.beta, hi, 1e-3);
        rep.sub(brute >= res.g_value - 1e-6,
                fmt("%s grid oracle on [0,%.3f]^2 step 1e-3: min g=%.12f, optimizer g=%.12f", c.label, hi,
                    brute, res.g_value));

        const bool kind_ok = res.kind == c.expected &&
                             (c.expected == OptimumCase::Interior ? p.c1 > 0.0 : p.c1 == 0.0);
        std::string detail = fmt("%s case=%s (expected %s) c1=%.10f c2=%.10f g=%.12f", c.label,
                                 std::string(to_string(res.kind)).c_str(),
                                 std::string(to_string(c.expected)).c_str(), p.c1, p.c2, res.g_value);
        if (!kind_ok && p.c1 > 0.0) {
            // c1 = 0 restricted minimum: coarse scan then Brent
            auto g0 = [&](double c2) { return (ps.value(c2) - ps.value(0.0)) / (c2 - p.beta); };
            const double lo = p.beta + 1e-6;
            double best_c2 = lo;
            for (double c2 = lo; c2 <= hi; c2 += 1e-3)
                if (g0(c2) < g0(best_c2)) best_c2 = c2;
            const auto [c2b, best_boundary] = boost::math::tools::brent_find_minima(
                g0, std::max(lo, best_c2 - 1e-3), best_c2 + 1e-3, 52);
            (void)c2b;
            detail += fmt("; best c1=0 point has g=%.12f, higher by %.2e; V'(0+)=%.10f > g*",
                          best_boundary, best_boundary - res.g_value,
                          ps.positive_branch().derivative(0.0));
        }
        rep.sub(kind_ok, detail);
    }
    return rep.ok;
}

bool criterion7(Report& rep) {
    for (const auto& spec : {brownian_fig2(), cl_fig4()}) {
        const ParisianScale ps(spec);
        // V' on (0, 20]: once increasing it never decreases again
        const int n = 20000;
        int turns = 0;
        bool rising = false;
        double prev = ps.positive_branch().derivative(20.0 / n);
        for (int k = 2; k <= n; ++k) {
            const double d = ps.positive_branch().derivative(20.0 * k / n);
            if (d > prev && !rising) {
                rising = true;
                ++turns;
            } else if (d < prev && rising) {
                ++turns;
            }
            prev = d;
        }
        rep.sub(turns <= 1 && rising, fmt("%s V' on (0,20]: %d turn(s), ends increasing",
                                          std::string(model_name(spec.model)).c_str(), turns));
    }
    for (const auto& spec : {brownian_fig2(), brownian_fig3(), cl_fig4(), cl_fig5()}) {
        const ParisianScale ps(spec);
        const auto res = find_optimal_policy(ps, spec.beta);
        const auto& p = res.policy;
        const char* name = is_brownian(spec) ? "Brownian" : "CL";

        bool nondecreasing = true;
        double prev = ps.positive_branch().derivative(p.c2);
        const double span = std::max(p.c2, 10.0);
        for (int k = 1; k <= 2000; ++k) {
            const double d = ps.positive_branch().derivative(p.c2 + span * k / 2000.0);
            nondecreasing = nondecreasing && d >= prev * (1.0 - 1e-12);
            prev = d;
        }
        rep.sub(nondecreasing, fmt("%s beta=%g V' nondecreasing on [c2*, c2*+%g]", name, spec.beta, span));

        std::vector<double> grid(200), v(200);
        for (int i = 0; i < 200; ++i) {
            grid[i] = 2.0 * p.c2 * i / 199.0;
            v[i] = value_function(ps, p, grid[i]);
        }
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 200; ++i)
            for (int j = 0; j <= i; ++j)
                worst = std::min(worst, v[i] - v[j] - (grid[i] - grid[j] - p.beta));
        rep.sub(worst >= -1e-9, fmt("%s beta=%g transfer inequality 200x200 on [0,2c2*]: worst margin %.3e",
                                    name, spec.beta, worst));
    }
    return rep.ok;
}

bool criterion8(Report& rep) {
    const auto spec = brownian_fig2();
    const auto& b = std::get<Brownian>(spec.model);
    const ParisianScale ps(spec);
    const auto res = find_optimal_policy(ps, spec.beta);
    const auto& p = res.policy;
    const double h = 1e-4;
    auto residual = [&](double x) {
        const double v0 = value_function(ps, p, x);
        const double vp = value_function(ps, p, x + h);
        const double vm = value_function(ps, p, x - h);
        const double drift = b.mu - (x > 0.0 ? spec.delta : 0.0);
        return 0.5 * b.sigma * b.sigma * (vp - 2.0 * v0 + vm) / (h * h) + drift * (vp - vm) / (2.0 * h) -
               spec.q * v0;
    };
    double worst_in = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double x = p.c2 * (k + 0.5) / 20.0;
        const double v = value_function(ps, p, x);
        worst_in = std::max(worst_in, std::abs(residual(x)) / (1.0 + v));
    }
    rep.sub(worst_in <= 1e-4, fmt("20 points in (0,c2*): max |(G-q)v|/(1+v)=%.2e (tol 1e-4)", worst_in));
    double worst_out = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 10; ++k) worst_out = std::max(worst_out, residual(p.c2 + 0.5 * k));
    rep.sub(worst_out <= 1e-4, fmt("10 points above c2*: max (G-q)v=%.4e (must be <= 1e-4)", worst_out));
    return rep.ok;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    bool (*run)(Report&);
};

const Criterion kCriteria[] = {
    {1, "V(0) = e^{qr}", 1.0, criterion1},
    {2, "closed-form V against its defining integral", 10.0, criterion2},
    {3, "refracted scale closed form against convolution", 30.0, criterion3},
    {4, "Monte Carlo exit identity", 120.0, criterion4},
    {5, "Monte Carlo policy NPV", 180.0, criterion5},
    {6, "optimizer residuals, grid oracle and case classification", 60.0, criterion6},
    {7, "unimodality, sufficiency and transfer inequality", 30.0, criterion7},
    {8, "generator residual", 10.0, criterion8},
};

bool run_one(const Criterion& c) {
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    Report rep;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        c.run(rep);
    } catch (const std::exception& e) {
        rep.sub(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.sub(secs < c.budget_seconds, fmt("runtime %.2f s (budget %g s)", secs, c.budget_seconds));
    std::printf("%s criterion %d (%s) %.2f s\n", rep.ok ? "PASS" : "FAIL", c.id, c.title, secs);
    std::fflush(stdout);
    return rep.ok;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
            return 2;
        }
    }
    bool all = true;
    bool matched = false;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        matched = true;
        all = run_one(c) && all;
    }
    if (!matched) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return all ? 0 : 1;
}
