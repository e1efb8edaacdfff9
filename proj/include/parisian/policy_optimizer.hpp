#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "parisian/kernels.hpp"
#include "parisian/parisian_scale.hpp"

namespace parisian {

/// Pay the surplus down to c1 whenever it reaches c2; each payment costs beta.
struct ImpulsePolicy {
    double c1 = 0.0;
    double c2 = 0.0;
    double beta = 0.0;
};

/// Throws DomainError unless c1 >= 0, beta > 0 and c2 > c1 + beta.
void validate(const ImpulsePolicy& policy);

enum class OptimumCase {
    Interior,  ///< V'(c1*) = V'(c2*), c1* > 0
    Boundary,  ///< c1* = 0
};

std::string_view to_string(OptimumCase kind);

struct OptimalPolicyResult {
    ImpulsePolicy policy;
    double g_value = 0.0;
    OptimumCase kind = OptimumCase::Boundary;
    /// |V'(c2*) - g| / g
    double fo_residual = 0.0;
    /// |V'(c1*) - V'(c2*)| / V'(c2*); 0 in the boundary case
    double interior_residual = 0.0;
    /// minimiser of V' on [0, inf)
    double a_star = 0.0;
    /// upper edge of the search box [0, box_max]^2
    double box_max = 0.0;
    bool converged = false;
    /// V' nondecreasing above c2* on the default sufficiency grid
    bool optimality_certified = false;
};

/// Raised when neither polished candidate meets the residual tolerance.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, ImpulsePolicy best, double best_g)
        : Error(what), best_grid_point(best), best_grid_g(best_g) {}

    ImpulsePolicy best_grid_point;
    double best_grid_g;
};

struct OptimizerOptions {
    std::size_t coarse_points = 600;
    int max_iterations = 200;
    double residual_tol = 1e-10;
    double tie_tol = 1e-10;
    Execution exec = Execution::Parallel;
};

/// (V(c2) - V(c1)) / (c2 - c1 - beta) on dom(g).
double g(const ParisianScale& ps, double c1, double c2, double beta);

OptimalPolicyResult find_optimal_policy(const ParisianScale& ps, double beta,
                                        const OptimizerOptions& opts = {});

/// Value of the (c1, c2) impulse strategy started at x.
double value_function(const ParisianScale& ps, const ImpulsePolicy& policy, double x);

struct ValueFunctionEval {
    ImpulsePolicy policy;
    std::vector<double> grid;
    std::vector<double> values;
};

ValueFunctionEval evaluate_value_function(const ParisianScale& ps, const ImpulsePolicy& policy,
                                          std::span<const double> grid);

struct TransferCheck {
    bool passed = true;
    double worst_margin = 0.0;  ///< min of v(x) - v(y) - (x - y - beta)
    double worst_x = 0.0;
    double worst_y = 0.0;
};

/// v(x) - v(y) >= x - y - beta - tol for all grid pairs x >= y >= 0.
TransferCheck check_transfer_inequality(const ParisianScale& ps, const OptimalPolicyResult& result,
                                        std::span<const double> grid, double tol = 1e-9);

/// 200 points on [0, 2 c2*].
std::vector<double> default_transfer_grid(const OptimalPolicyResult& result);

/// V'(x) <= V'(y) + tol for grid points c2* <= x <= y.
bool check_sufficiency(const ParisianScale& ps, const OptimalPolicyResult& result,
                       std::span<const double> grid, double tol = 1e-9);

/// 400 points on [c2*, c2* + max(c2*, 10)].
std::vector<double> default_sufficiency_grid(const OptimalPolicyResult& result);

struct UnimodalityCheck {
    bool passed = false;  ///< V' decreases then increases on the grid
    int turns = 0;        ///< sign changes of successive differences of V'
    double grid_argmin = 0.0;
};

/// Grid points must avoid the points where V' is undefined.
UnimodalityCheck certify_unimodal(const ParisianScale& ps, std::span<const double> grid);

/// (Gamma - q) f at x, derivatives by central differences with step h.
/// Brownian: (mu - delta 1{x>0}) f' + sigma^2/2 f'' - q f.
/// Cramér–Lundberg: (p - delta 1{x>0}) f' + lambda int_0^inf (f(x-z) - f(x)) mu e^{-mu z} dz - q f.
/// kinks lists points where f is not smooth; x must stay h away from them.
double generator_residual(const ParisianScale& ps, const std::function<double(double)>& f,
                          double x, std::span<const double> kinks = {}, double h = 1e-4);

/// (Gamma - q) v at x for the optimal impulse strategy's value function.
double generator_residual(const ParisianScale& ps, const OptimalPolicyResult& result, double x,
                          double h = 1e-4);

}  // namespace parisian
