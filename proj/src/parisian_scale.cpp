#include "parisian/parisian_scale.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "parisian/scale_functions.hpp"
#include "parisian/special.hpp"

namespace parisian {

double CompoundPoissonLaw::atom() const { return std::exp(-lambda * r); }

double compound_density(const CompoundPoissonLaw& law, double y) {
    if (y < 0.0) return 0.0;
    // e^{-lambda r} e^{-mu y} sum (mu lambda r)^{m+1} y^m / (m! (m+1)!)
    return special::bessel_type_series(law.mu_claim * law.lambda * law.r, y,
                                       law.lambda * law.r + law.mu_claim * y, law.series_tol,
                                       law.max_terms);
}

namespace {

/// sum_m (pr k_other)^m / (m+1)! * P(m+1, L k_self) * (pr k_self - m - 1),
/// and optionally its L-derivative divided by e^{q L} (see cl_middle).
struct GammaSeries {
    double value = 0.0;
    double d_value = 0.0;
};

GammaSeries gamma_series(double pr, double k_self, double k_other, double length, double mu_claim,
                         double tol, int max_terms, bool want_derivative) {
    const std::vector<double> reg = special::regularized_lower_gamma_table(length * k_self, max_terms);
    const double ratio = pr * k_other;
    const double peak = std::max(pr * k_self, ratio);
    const double arg = length * k_self;
    GammaSeries out;
    double coef = 1.0;  // (pr k_other)^m / (m+1)!
    double abs_sum = 0.0;
    for (int m = 0; m < max_terms; ++m) {
        if (m > 0) coef *= ratio / (m + 1);
        const double factor = pr * k_self - (m + 1);
        const double term = coef * reg[static_cast<std::size_t>(m)] * factor;
        out.value += term;
        abs_sum += std::abs(term);
        double d_term = 0.0;
        if (want_derivative && arg > 0.0) {
            // d/dL P(m+1, L k) = k e^{-kL} (kL)^m / m!; the e^{q L} prefactor
            // combines with e^{-kL} into e^{-mu L}.
            d_term = coef * factor * k_self *
                     std::exp(-mu_claim * length + m * std::log(arg) - std::lgamma(m + 1.0));
            out.d_value += d_term;
        } else if (want_derivative && m == 0) {
            d_term = coef * factor * k_self;
            out.d_value += d_term;
        }
        if (m > peak && std::abs(term) <= tol * abs_sum &&
            (!want_derivative || std::abs(d_term) <= tol * (std::abs(out.d_value) + abs_sum))) {
            return out;
        }
    }
    throw SeriesFailure("incomplete-gamma series did not converge in " +
                        std::to_string(max_terms) + " terms");
}

}  // namespace

ParisianScale::ParisianScale(const ProblemSpec& spec, double series_tol, int max_terms)
    : spec_(spec),
      coeffs_(compute_coefficients(spec)),
      series_tol_(series_tol),
      max_terms_(max_terms) {
    const double eqr = std::exp(spec_.q * spec_.r);
    if (const auto* yr = std::get_if<BrownianRoots>(&coeffs_.y)) {
        derivative_moment_ = brownian_constant();
        // (sigma^2/2) WW(x) I' + e^{qr}/rho^Y (rho1^Y e^{rho2^Y x} + rho2^Y e^{-rho1^Y x})
        positive_ = ExpPair{(derivative_moment_ + yr->rho1 * eqr) / yr->rho, yr->rho2,
                            (derivative_moment_ - yr->rho2 * eqr) / yr->rho, -yr->rho1};
        return;
    }
    const auto& c = std::get<CramerLundberg>(spec_.model);
    const auto& yr = std::get<CramerLundbergRoots>(coeffs_.y);
    support_start_ = -c.p * spec_.r;
    derivative_moment_ = cl_constant();
    const double py = c.p - spec_.delta;
    const double d = (spec_.q + c.lambda) * eqr - c.p * derivative_moment_;
    const double scale = d / (c.mu_claim * c.lambda * py);
    // e^{qr} (p-delta) WW(x) - D/(mu lambda) [(q+lambda) WW(x) - (p-delta) WW'(x)]
    positive_ = ExpPair{
        yr.a_plus * (eqr - scale * (spec_.q + c.lambda - py * yr.q_plus)), yr.q_plus,
        yr.a_minus * (eqr - scale * (spec_.q + c.lambda - py * yr.q_minus)), yr.q_minus};
}

double ParisianScale::brownian_constant() const {
    const auto& b = std::get<Brownian>(spec_.model);
    const auto& xr = std::get<BrownianRoots>(coeffs_.x);
    const double s2 = b.sigma * b.sigma;
    const double disc = std::sqrt(b.mu * b.mu + 2.0 * spec_.q * s2);
    const double eqr = std::exp(spec_.q * spec_.r);
    return 2.0 / std::sqrt(2.0 * std::numbers::pi * s2 * spec_.r) *
               std::exp(-spec_.r * b.mu * b.mu / (2.0 * s2)) +
           xr.rho2 * eqr -
           xr.rho * eqr * special::normal_cdf(-spec_.r * disc / (b.sigma * std::sqrt(spec_.r)));
}

double ParisianScale::cl_constant() const {
    const auto& c = std::get<CramerLundberg>(spec_.model);
    const auto& xr = std::get<CramerLundbergRoots>(coeffs_.x);
    const double pr = c.p * spec_.r;
    const double kp = xr.q_plus + c.mu_claim;
    const double km = xr.q_minus + c.mu_claim;
    const auto s1 = gamma_series(pr, kp, km, pr, c.mu_claim, series_tol_, max_terms_, false);
    const auto s2 = gamma_series(pr, km, kp, pr, c.mu_claim, series_tol_, max_terms_, false);
    const double tail =
        special::bessel_type_series(c.p * c.lambda * c.mu_claim * spec_.r * spec_.r, 1.0,
                                    c.mu_claim * pr, series_tol_, max_terms_) /
        pr;
    return std::exp(-c.lambda * spec_.r) *
           (c.p * coeffs_.scale_x.derivative(pr, 1) +
            xr.a_minus * xr.q_plus * checked_exp(xr.q_plus * pr) * s1.value -
            xr.a_plus * xr.q_minus * std::exp(xr.q_minus * pr) * s2.value + tail);
}

double ParisianScale::cl_middle(double x, bool derivative) const {
    const auto& c = std::get<CramerLundberg>(spec_.model);
    const auto& xr = std::get<CramerLundbergRoots>(coeffs_.x);
    const double pr = c.p * spec_.r;
    const double length = x + pr;
    const double kp = xr.q_plus + c.mu_claim;
    const double km = xr.q_minus + c.mu_claim;
    const auto s1 = gamma_series(pr, kp, km, length, c.mu_claim, series_tol_, max_terms_, derivative);
    const auto s2 = gamma_series(pr, km, kp, length, c.mu_claim, series_tol_, max_terms_, derivative);
    const double ep = checked_exp(xr.q_plus * length);
    const double em = std::exp(xr.q_minus * length);
    const double atom = std::exp(-c.lambda * spec_.r);
    if (!derivative) {
        return atom * (c.p * coeffs_.scale_x.value(length) + xr.a_minus * ep * s1.value -
                       xr.a_plus * em * s2.value);
    }
    return atom * (c.p * coeffs_.scale_x.derivative(length, 1) +
                   xr.a_minus * (xr.q_plus * ep * s1.value + s1.d_value) -
                   xr.a_plus * (xr.q_minus * em * s2.value + s2.d_value));
}

namespace {

/// e^{e} * Phi(-d) without forming inf * 0.
double exp_times_upper_tail(double e, double d) {
    const double tail = special::normal_cdf(-d);
    if (tail == 0.0) return 0.0;
    return std::exp(e + std::log(tail));
}

double exp_times_pdf(double e, double d) { return std::exp(e - 0.5 * d * d) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

double ParisianScale::brownian_negative(double x) const {
    const auto& b = std::get<Brownian>(spec_.model);
    const auto& xr = std::get<BrownianRoots>(coeffs_.x);
    const double vol = b.sigma * std::sqrt(spec_.r);
    const double drift = spec_.r * std::sqrt(b.mu * b.mu + 2.0 * spec_.q * b.sigma * b.sigma);
    const double qr = spec_.q * spec_.r;
    return exp_times_upper_tail(qr + xr.rho2 * x, (-x - drift) / vol) +
           exp_times_upper_tail(qr - xr.rho1 * x, (-x + drift) / vol);
}

double ParisianScale::brownian_negative_derivative(double x) const {
    const auto& b = std::get<Brownian>(spec_.model);
    const auto& xr = std::get<BrownianRoots>(coeffs_.x);
    const double vol = b.sigma * std::sqrt(spec_.r);
    const double drift = spec_.r * std::sqrt(b.mu * b.mu + 2.0 * spec_.q * b.sigma * b.sigma);
    const double qr = spec_.q * spec_.r;
    const double d1 = (-x - drift) / vol;
    const double d2 = (-x + drift) / vol;
    return xr.rho2 * exp_times_upper_tail(qr + xr.rho2 * x, d1) -
           xr.rho1 * exp_times_upper_tail(qr - xr.rho1 * x, d2) +
           (exp_times_pdf(qr + xr.rho2 * x, d1) + exp_times_pdf(qr - xr.rho1 * x, d2)) / vol;
}

double ParisianScale::value(double x) const {
    if (is_brownian(spec_)) return x >= 0.0 ? positive_.value(x) : brownian_negative(x);
    if (x > 0.0) return positive_.value(x);
    if (x < support_start_) return 0.0;
    return cl_middle(x, false);
}

double ParisianScale::derivative(double x) const {
    if (is_brownian(spec_)) {
        return x >= 0.0 ? positive_.derivative(x, 1) : brownian_negative_derivative(x);
    }
    if (x == 0.0 || x == support_start_) {
        throw UndefinedDerivative("V' is undefined at x = " + std::to_string(x) +
                                  " for the Cramér–Lundberg model");
    }
    if (x > 0.0) return positive_.derivative(x, 1);
    if (x < support_start_) return 0.0;
    return cl_middle(x, true);
}

double V(const ParisianScale& ps, double x) { return ps.value(x); }

double V_prime(const ParisianScale& ps, double x) { return ps.derivative(x); }

double constant_C(const ParisianScale& ps) {
    if (is_brownian(ps.spec())) {
        throw DomainError("constant C is defined for the Cramér–Lundberg model only");
    }
    return ps.derivative_moment();
}

double V_quadrature_oracle(const ParisianScale& ps, double x, const QuadratureOptions& opts) {
    const ProblemSpec& spec = ps.spec();
    const ScaleCoefficients& coeffs = ps.coefficients();
    if (const auto* b = std::get_if<Brownian>(&spec.model)) {
        const double mean = b->mu * spec.r;
        const double sd = b->sigma * std::sqrt(spec.r);
        const double lo = std::max({0.0, -x, mean - 12.0 * sd});
        const double hi = mean + 12.0 * sd;
        if (hi <= lo) return 0.0;
        auto f = [&](double z) {
            return refracted_w(spec, coeffs, x, z) * (z / spec.r) *
                   special::normal_pdf((z - mean) / sd) / sd;
        };
        return integrate(f, lo, hi, opts);
    }
    const auto& c = std::get<CramerLundberg>(spec.model);
    const double pr = c.p * spec.r;
    if (x < -pr) return 0.0;
    const CompoundPoissonLaw law{c.lambda, c.mu_claim, spec.r, ps.series_tol()};
    // X_r = pr - S: atom at z = pr, density of S mapped through z = pr - y.
    const double atom = law.atom() * refracted_w(spec, coeffs, x, pr) * c.p;
    const double hi = x >= 0.0 ? pr : pr + x;
    if (hi <= 0.0) return atom;
    auto f = [&](double y) {
        const double z = pr - y;
        return refracted_w(spec, coeffs, x, z) * (z / spec.r) * compound_density(law, y);
    };
    return atom + integrate(f, 0.0, hi, opts);
}

double refracted_w_convolution(const ProblemSpec& spec, const ScaleCoefficients& coeffs, double x,
                               double z, const QuadratureOptions& opts) {
    const ScaleFunction wx = ScaleFunction::of(coeffs, Process::X);
    const ScaleFunction wy = ScaleFunction::of(coeffs, Process::Y);
    if (x < 0.0) return W(wx, x + z);
    auto f = [&](double y) { return W(wy, x - y) * W_prime(wx, y + z); };
    return W(wx, x + z) + spec.delta * integrate(f, 0.0, x, opts);
}

}  // namespace parisian
