#include "parisian/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parisian/config.hpp"
#include "parisian/kernels.hpp"
#include "parisian/output.hpp"
#include "parisian/parisian_scale.hpp"
#include "parisian/policy_optimizer.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"
#include "parisian/verify.hpp"

namespace parisian::cli {

namespace {

/// Command-line mistakes that are not caught by CLI11 itself.
class UsageError : public Error {
public:
    using Error::Error;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
};

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw UsageError("'" + s + "' is not a number in " + what);
    }
    return v;
}

GridSpec parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
        throw UsageError("--grid expects MIN:MAX:N, got '" + text + "'");
    }
    GridSpec g;
    g.lo = parse_double(text.substr(0, first), "--grid");
    g.hi = parse_double(text.substr(first + 1, second - first - 1), "--grid");
    const std::string n = text.substr(second + 1);
    unsigned long long count = 0;
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), count);
    if (n.empty() || ec != std::errc{} || ptr != n.data() + n.size()) {
        throw UsageError("--grid point count '" + n + "' is not an integer");
    }
    g.n = static_cast<std::size_t>(count);
    if (g.n < 2) throw UsageError("--grid needs at least 2 points");
    if (!(g.lo < g.hi)) throw UsageError("--grid needs MIN < MAX");
    return g;
}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::optional<double> beta;
    std::string out;
    std::string svg;

    void attach(CLI::App* app, bool with_svg) {
        app->add_option("--config", config, "YAML problem file")->check(CLI::ExistingFile);
        app->add_option("--set", sets, "override key=value (repeatable, beats the file)");
        app->add_option("--beta", beta, "transaction cost (beats --set)");
        app->add_option("--out", out, "output CSV path");
        if (with_svg) app->add_option("--svg", svg, "also write an SVG chart");
    }

    ProblemSpec spec() const {
        std::vector<std::string> all = sets;
        if (beta) all.push_back("beta=" + format_number(*beta));
        if (config.empty()) return problem_spec_from_overrides(all);
        return load_problem_spec(config, all);
    }
};

std::ofstream open_output(const std::string& path, bool append) {
    std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
    if (!f) throw UsageError("cannot open '" + path + "' for writing");
    return f;
}

bool needs_header(const std::string& path) {
    std::error_code ec;
    return !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
}

template <class F>
std::string cell(F&& f) {
    try {
        const double v = f();
        return std::isfinite(v) ? format_number(v) : "overflow";
    } catch (const UndefinedDerivative&) {
        return "";
    } catch (const OverflowRange&) {
        return "overflow";
    }
}

void write_svg_file(const std::string& path, const Chart& chart) {
    auto f = open_output(path, false);
    write_svg(f, chart);
}

/// model plus every parameter key, blank where the model has no such key.
std::vector<std::string> param_fields(const ProblemSpec& spec) {
    std::vector<std::string> f{std::string(model_name(spec.model))};
    if (const auto* b = std::get_if<Brownian>(&spec.model)) {
        f.insert(f.end(), {format_number(b->mu), format_number(b->sigma), "", "", ""});
    } else {
        const auto& c = std::get<CramerLundberg>(spec.model);
        f.insert(f.end(), {"", "", format_number(c.p), format_number(c.lambda),
                           format_number(c.mu_claim)});
    }
    f.insert(f.end(), {format_number(spec.delta), format_number(spec.q), format_number(spec.r),
                       format_number(spec.beta)});
    return f;
}

const std::vector<std::string> kParamHeader{"model", "mu", "sigma", "p", "lambda",
                                            "mu_claim", "delta", "q", "r", "beta"};

// eval ----------------------------------------------------------------------

int cmd_eval(const Common& c, const std::string& grid_text, double z, std::ostream& out) {
    const ProblemSpec spec = c.spec();
    const ParisianScale ps(spec);
    GridSpec g{std::isfinite(ps.support_start()) ? ps.support_start() : -3.0, 6.0, 181};
    if (!grid_text.empty()) g = parse_grid(grid_text);
    if (!(z >= 0.0)) throw UsageError("--z must be >= 0");
    const auto xs = kernels::linspace(g.lo, g.hi, g.n);
    const auto sf = ScaleFunction::of(ps.coefficients(), Process::X);

    std::ofstream file;
    if (!c.out.empty()) file = open_output(c.out, false);
    std::ostream& sink = c.out.empty() ? out : file;
    const std::vector<std::string> header{"x", "W", "W_prime", "Z", "w", "V", "V_prime"};
    write_csv_row(sink, header);
    std::vector<double> v_col;
    for (double x : xs) {
        const std::vector<std::string> row{
            format_number(x),
            cell([&] { return W(sf, x); }),
            cell([&] { return W_prime(sf, x); }),
            cell([&] { return Z(sf, x); }),
            cell([&] { return refracted_w(spec, ps.coefficients(), x, z); }),
            cell([&] { return ps.value(x); }),
            cell([&] { return ps.derivative(x); }),
        };
        write_csv_row(sink, row);
        try {
            v_col.push_back(ps.value(x));
        } catch (const OverflowRange&) {
            v_col.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    if (!c.svg.empty()) {
        Chart chart{"Parisian refracted scale function V", "x", "V(x)", {{"V", xs, v_col}}, {}};
        write_svg_file(c.svg, chart);
    }
    return kSuccess;
}

// optimize ------------------------------------------------------------------

int cmd_optimize(const Common& c, const std::string& grid_text, const std::string& summary,
                 std::ostream& out, std::ostream& err) {
    const ProblemSpec spec = c.spec();
    const ParisianScale ps(spec);
    OptimalPolicyResult res;
    try {
        res = find_optimal_policy(ps, spec.beta);
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << "\n"
            << "best grid point: c1=" << format_number(e.best_grid_point.c1)
            << " c2=" << format_number(e.best_grid_point.c2)
            << " g=" << format_number(e.best_grid_g) << "\n";
        return kNumericalFailure;
    }
    const auto transfer = check_transfer_inequality(ps, res, default_transfer_grid(res));

    out << "model: " << model_name(spec.model) << "\n"
        << "beta: " << format_number(spec.beta) << "\n"
        << "c1_star: " << format_number(res.policy.c1) << "\n"
        << "c2_star: " << format_number(res.policy.c2) << "\n"
        << "g_star: " << format_number(res.g_value) << "\n"
        << "case: " << to_string(res.kind) << "\n"
        << "fo_residual: " << format_number(res.fo_residual) << "\n"
        << "interior_residual: " << format_number(res.interior_residual) << "\n"
        << "a_star: " << format_number(res.a_star) << "\n"
        << "box_max: " << format_number(res.box_max) << "\n"
        << "converged: " << (res.converged ? "true" : "false") << "\n"
        << "sufficiency_pass: " << (res.optimality_certified ? "true" : "false") << "\n"
        << "transfer_worst_margin: " << format_number(transfer.worst_margin) << "\n";

    if (!summary.empty()) {
        const bool header = needs_header(summary);
        auto f = open_output(summary, true);
        if (header) {
            auto cols = kParamHeader;
            cols.insert(cols.end(), {"c1_star", "c2_star", "g_star", "case", "fo_residual",
                                     "sufficiency_pass"});
            write_csv_row(f, cols);
        }
        auto row = param_fields(spec);
        row.insert(row.end(), {format_number(res.policy.c1), format_number(res.policy.c2),
                               format_number(res.g_value), std::string(to_string(res.kind)),
                               format_number(res.fo_residual),
                               res.optimality_certified ? "true" : "false"});
        write_csv_row(f, row);
    }

    if (!c.out.empty() || !c.svg.empty()) {
        GridSpec g{0.0, 2.0 * res.policy.c2, 201};
        if (!grid_text.empty()) g = parse_grid(grid_text);
        auto xs = kernels::linspace(g.lo, g.hi, g.n);
        struct Row {
            double x;
            std::string marker;
        };
        std::vector<Row> rows;
        for (double x : xs) rows.push_back({x, ""});
        rows.push_back({res.policy.c1, "c1_star"});
        rows.push_back({res.policy.c2, "c2_star"});
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.x < b.x; });
        if (!c.out.empty()) {
            auto f = open_output(c.out, false);
            write_csv_row(f, std::vector<std::string>{"x", "V_prime", "marker"});
            for (const auto& r : rows) {
                write_csv_row(f, std::vector<std::string>{
                                     format_number(r.x),
                                     cell([&] { return ps.derivative(r.x); }), r.marker});
            }
        }
        if (!c.svg.empty()) {
            std::vector<double> d;
            for (double x : xs) {
                try {
                    d.push_back(ps.derivative(x));
                } catch (const UndefinedDerivative&) {
                    d.push_back(std::numeric_limits<double>::quiet_NaN());
                }
            }
            Chart chart{"V' with the optimal impulse levels",
                        "x",
                        "V'(x)",
                        {{"V'", xs, d}},
                        {{res.policy.c1, "c1*"}, {res.policy.c2, "c2*"}}};
            write_svg_file(c.svg, chart);
        }
    }
    return kSuccess;
}

// verify --------------------------------------------------------------------

int cmd_verify(const Common& c, const VerifyOptions& opts, std::ostream& out) {
    const ProblemSpec spec = c.spec();
    const auto results = run_verification(spec, opts);
    std::size_t passed = 0;
    std::ofstream file;
    if (!c.out.empty()) file = open_output(c.out, false);
    for (const auto& r : results) {
        passed += r.passed ? 1 : 0;
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " observed=" << format_number(r.observed)
            << " expected=" << format_number(r.expected) << " tol=" << format_number(r.tolerance);
        if (!r.detail.empty()) out << " (" << r.detail << ")";
        out << "\n";
        if (file) {
            write_csv_row(file, std::vector<std::string>{r.name, r.passed ? "pass" : "fail",
                                                         format_number(r.observed),
                                                         format_number(r.expected),
                                                         format_number(r.tolerance)});
        }
    }
    out << passed << "/" << results.size() << " checks passed\n";
    return passed == results.size() ? kSuccess : kCheckFailure;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::string functional;
    double x = 1.0;
    std::optional<double> a;
    std::optional<double> c1;
    std::optional<double> c2;
    std::size_t paths = 100000;
    std::uint64_t seed = 42;
    double dt = 0.0;
    double horizon = 0.0;
    bool antithetic = false;
};

int cmd_simulate(const Common& c, const SimulateArgs& args, std::ostream& out) {
    const ProblemSpec spec = c.spec();
    SimulationConfig cfg;
    cfg.paths = args.paths;
    cfg.seed = args.seed;
    cfg.dt = args.dt;
    cfg.horizon = args.horizon;
    cfg.antithetic = args.antithetic;
    const ParisianScale ps(spec);

    MonteCarloEstimate est;
    std::string target_text;
    double analytic = 0.0;
    if (args.functional == "exit") {
        if (!args.a) throw UsageError("--a is required for the exit functional");
        est = estimate_exit_functional(spec, args.x, *args.a, cfg);
        target_text = format_number(*args.a);
        analytic = ps.value(args.x) / ps.value(*args.a);
    } else {
        ImpulsePolicy policy;
        if (args.c1 && args.c2) {
            policy = ImpulsePolicy{*args.c1, *args.c2, spec.beta};
        } else if (!args.c1 && !args.c2) {
            policy = find_optimal_policy(ps, spec.beta).policy;
        } else {
            throw UsageError("give both --c1 and --c2, or neither to use the optimum");
        }
        est = estimate_policy_npv(spec, policy, args.x, cfg);
        target_text = format_number(policy.c1) + ":" + format_number(policy.c2);
        analytic = value_function(ps, policy, args.x);
    }

    const std::string dt_text =
        is_brownian(spec) ? format_number(cfg.dt > 0.0 ? cfg.dt : default_dt(spec)) : "";
    const std::vector<std::string> row{args.functional, format_number(args.x), target_text,
                                       format_number(est.mean), format_number(est.std_error),
                                       std::to_string(est.n_effective), std::to_string(args.seed),
                                       dt_text};
    const std::vector<std::string> header{"functional", "x", "a_or_policy", "estimate",
                                          "stderr", "n", "seed", "dt"};
    if (c.out.empty()) {
        write_csv_row(out, header);
        write_csv_row(out, row);
    } else {
        const bool fresh = needs_header(c.out);
        auto f = open_output(c.out, true);
        if (fresh) write_csv_row(f, header);
        write_csv_row(f, row);
        const double zscore =
            est.std_error > 0.0 ? (est.mean - analytic) / est.std_error : 0.0;
        out << "estimate " << format_number(est.mean) << " +- " << format_number(est.std_error)
            << ", analytic " << format_number(analytic) << ", z " << format_number(zscore)
            << ", " << format_number(est.elapsed_seconds) << " s\n";
    }
    if (!est.warning.empty()) out << "warning: " << est.warning << "\n";
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parisian refracted scale functions and impulse dividend policies", "parisian"};
    app.require_subcommand(1);

    Common eval_common;
    std::string eval_grid;
    double eval_z = 1.0;
    auto* eval = app.add_subcommand("eval", "tabulate W, W', Z, w(x;-z), V and V' on a grid");
    eval_common.attach(eval, true);
    eval->add_option("--grid", eval_grid, "MIN:MAX:N (use --grid=MIN:... for negative MIN)");
    eval->add_option("--z", eval_z, "z in w(x;-z)")->capture_default_str();

    Common opt_common;
    std::string opt_grid;
    std::string opt_summary;
    auto* optimize = app.add_subcommand("optimize", "find the optimal (c1, c2) impulse policy");
    opt_common.attach(optimize, true);
    optimize->add_option("--grid", opt_grid, "MIN:MAX:N grid for the V' table");
    optimize->add_option("--summary", opt_summary, "append a one-row CSV summary");

    Common ver_common;
    VerifyOptions ver_opts;
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    ver_common.attach(verify, false);
    verify->add_flag("--with-mc", ver_opts.with_mc, "add Monte Carlo comparisons");
    verify->add_option("--paths", ver_opts.paths, "Monte Carlo paths")->capture_default_str();
    verify->add_option("--seed", ver_opts.seed, "RNG seed")->capture_default_str();
    verify->add_option("--dt", ver_opts.dt, "Euler step (Brownian)");

    Common sim_common;
    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a functional");
    sim_common.attach(simulate, false);
    simulate->add_option("--functional", sim_args.functional, "exit | npv")
        ->required()
        ->check(CLI::IsMember({"exit", "npv"}));
    simulate->add_option("--x", sim_args.x, "starting level")->capture_default_str();
    simulate->add_option("--a", sim_args.a, "upper level of the exit functional");
    simulate->add_option("--c1", sim_args.c1, "policy c1 (default: optimum)");
    simulate->add_option("--c2", sim_args.c2, "policy c2 (default: optimum)");
    simulate->add_option("--paths", sim_args.paths, "path count")->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--dt", sim_args.dt, "Euler step (Brownian)");
    simulate->add_option("--horizon", sim_args.horizon, "time cap");
    simulate->add_flag("--antithetic", sim_args.antithetic, "antithetic pairs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*eval) return cmd_eval(eval_common, eval_grid, eval_z, out);
        if (*optimize) return cmd_optimize(opt_common, opt_grid, opt_summary, out, err);
        if (*verify) return cmd_verify(ver_common, ver_opts, out);
        return cmd_simulate(sim_common, sim_args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsageError;
    } catch (const InvalidRefraction& e) {
        err << "invalid refraction: " << e.what() << "\n";
        return kUsageError;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kUsageError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace parisian::cli
