#include "parisian/levy_models.hpp"

#include <limits>
#include <string>

namespace parisian {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be finite and > 0, got " +
                               std::to_string(v));
    }
}

}  // namespace

std::string_view model_name(const ModelSpec& model) {
    return std::holds_alternative<Brownian>(model) ? "brownian" : "cramer-lundberg";
}

void validate(const ModelSpec& model) {
    std::visit(overloaded{
                   [](const Brownian& b) {
                       if (!std::isfinite(b.mu)) throw InvalidParameter("mu must be finite");
                       require_positive(b.sigma, "sigma");
                   },
                   [](const CramerLundberg& c) {
                       require_positive(c.p, "p");
                       require_positive(c.lambda, "lambda");
                       require_positive(c.mu_claim, "mu_claim");
                   },
               },
               model);
}

void validate(const ProblemSpec& spec) {
    validate(spec.model);
    require_positive(spec.delta, "delta");
    require_positive(spec.q, "q");
    require_positive(spec.r, "r");
    require_positive(spec.beta, "beta");
    if (const auto* c = std::get_if<CramerLundberg>(&spec.model)) {
        if (!(c->p - spec.delta > 0.0)) {
            throw InvalidRefraction("p - delta must be > 0 (p=" + std::to_string(c->p) +
                                    ", delta=" + std::to_string(spec.delta) + ")");
        }
    }
}

bool is_brownian(const ProblemSpec& spec) {
    return std::holds_alternative<Brownian>(spec.model);
}

double laplace_exponent(const ModelSpec& model, double theta) {
    return std::visit(overloaded{
                          [&](const Brownian& b) {
                              return b.mu * theta + 0.5 * b.sigma * b.sigma * theta * theta;
                          },
                          [&](const CramerLundberg& c) {
                              if (!(theta > -c.mu_claim)) {
                                  throw DomainError("Cramér–Lundberg psi needs theta > -mu_claim");
                              }
                              return c.p * theta - c.lambda * theta / (c.mu_claim + theta);
                          },
                      },
                      model);
}

ModelSpec drift_adjusted(const ProblemSpec& spec) {
    return std::visit(overloaded{
                          [&](const Brownian& b) -> ModelSpec {
                              return Brownian{b.mu - spec.delta, b.sigma};
                          },
                          [&](const CramerLundberg& c) -> ModelSpec {
                              if (!(c.p - spec.delta > 0.0)) {
                                  throw InvalidRefraction("p - delta must be > 0");
                              }
                              return CramerLundberg{c.p - spec.delta, c.lambda, c.mu_claim};
                          },
                      },
                      spec.model);
}

BrownianRoots brownian_roots(double mu, double sigma, double q) {
    const double s2 = sigma * sigma;
    const double disc = std::sqrt(mu * mu + 2.0 * q * s2);
    BrownianRoots out;
    out.rho1 = (disc + mu) / s2;
    // disc - mu loses digits when mu >> 0; use the Vieta partner instead.
    out.rho2 = mu > 0.0 ? 2.0 * q / (disc + mu) : (disc - mu) / s2;
    if (mu < 0.0) out.rho1 = 2.0 * q / (disc - mu);
    out.rho = 2.0 * disc / s2;
    return out;
}

CramerLundbergRoots cramer_lundberg_roots(double p, double lambda, double mu_claim, double q) {
    // p theta^2 + (p mu - q - lambda) theta - q mu = 0
    const double b = q + lambda - mu_claim * p;
    const double disc = std::sqrt(b * b + 4.0 * p * q * mu_claim);
    CramerLundbergRoots out;
    const double prod = -q * mu_claim / p;  // q_plus * q_minus
    if (b >= 0.0) {
        out.q_plus = (b + disc) / (2.0 * p);
        out.q_minus = prod / out.q_plus;
    } else {
        out.q_minus = (b - disc) / (2.0 * p);
        out.q_plus = prod / out.q_minus;
    }
    const double spread = out.q_plus - out.q_minus;
    out.a_plus = (mu_claim + out.q_plus) / spread;
    out.a_minus = (mu_claim + out.q_minus) / spread;
    return out;
}

double right_inverse_phi(const ModelSpec& model, double q) {
    if (!(q > 0.0)) throw DomainError("right_inverse_phi needs q > 0");
    return std::visit(overloaded{
                          [&](const Brownian& b) { return brownian_roots(b.mu, b.sigma, q).rho2; },
                          [&](const CramerLundberg& c) {
                              return cramer_lundberg_roots(c.p, c.lambda, c.mu_claim, q).q_plus;
                          },
                      },
                      model);
}

double checked_exp(double exponent) {
    if (exponent > kMaxExponent) {
        throw OverflowRange("exponent " + std::to_string(exponent) + " exceeds double range");
    }
    return std::exp(exponent);
}

double ExpPair::value(double x) const {
    return a_plus * checked_exp(k_plus * x) - a_minus * checked_exp(k_minus * x);
}

double ExpPair::derivative(double x, int order) const {
    return a_plus * std::pow(k_plus, order) * checked_exp(k_plus * x) -
           a_minus * std::pow(k_minus, order) * checked_exp(k_minus * x);
}

double ExpPair::integral(double x) const {
    (void)checked_exp(k_plus * x);
    (void)checked_exp(k_minus * x);
    return a_plus * std::expm1(k_plus * x) / k_plus - a_minus * std::expm1(k_minus * x) / k_minus;
}

double ExpPair::argmin_derivative() const {
    // second derivative a+ k+^2 e^{k+ x} - a- k-^2 e^{k- x} has at most one root
    if (a_minus <= 0.0 || a_plus <= 0.0) return 0.0;
    const double ratio = (a_minus * k_minus * k_minus) / (a_plus * k_plus * k_plus);
    const double x = std::log(ratio) / (k_plus - k_minus);
    return x > 0.0 ? x : 0.0;
}

namespace {

struct RootsAndPair {
    ProcessRoots roots;
    ExpPair pair;
};

RootsAndPair roots_for(const ModelSpec& model, double q) {
    return std::visit(
        overloaded{
            [&](const Brownian& b) {
                const BrownianRoots br = brownian_roots(b.mu, b.sigma, q);
                // 2/(sigma^2 rho) = 1/sqrt(mu^2 + 2 q sigma^2)
                const double amp = 2.0 / (b.sigma * b.sigma * br.rho);
                return RootsAndPair{br, ExpPair{amp, br.rho2, amp, -br.rho1}};
            },
            [&](const CramerLundberg& c) {
                const CramerLundbergRoots cr = cramer_lundberg_roots(c.p, c.lambda, c.mu_claim, q);
                return RootsAndPair{cr, ExpPair{cr.a_plus / c.p, cr.q_plus, cr.a_minus / c.p,
                                                cr.q_minus}};
            },
        },
        model);
}

}  // namespace

ScaleCoefficients compute_coefficients(const ProblemSpec& spec) {
    validate(spec);
    const RootsAndPair x = roots_for(spec.model, spec.q);
    const RootsAndPair y = roots_for(drift_adjusted(spec), spec.q);
    return ScaleCoefficients{spec.q, x.roots, y.roots, x.pair, y.pair};
}

}  // namespace parisian
