#include "qie/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qie {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double gaussian_norm(double sigma2) { return 1.0 / std::sqrt(kTwoPi * sigma2); }

// x*ln(x) evaluated from ln(x); 0 at x = 0.
double x_ln_x(double log_x) {
    const double x = std::exp(log_x);
    return x == 0.0 ? 0.0 : x * log_x;
}

} // namespace

void EngineParams::validate() const {
    if (!(delta_E > 0.0) || !std::isfinite(delta_E))
        throw InvalidInput("EngineParams: delta_E must be > 0 (got " +
                           std::to_string(delta_E) + " meV)");
    if (!(T_S > 0.0) || !std::isfinite(T_S))
        throw InvalidInput("EngineParams: T_S must be > 0 (got " +
                           std::to_string(T_S) + " K)");
    if (!(T_M > 0.0) || !std::isfinite(T_M))
        throw InvalidInput("EngineParams: T_M must be > 0 (got " +
                           std::to_string(T_M) + " K)");
}

ThermalTLS thermal_populations(const EngineParams& params) {
    params.validate();
    const double r = std::exp(-params.delta_E / params.kT_S());
    const double a = 1.0 / (1.0 + r);
    return {a, 1.0 - a}; // a + b = 1 exactly
}

LogPopulations log_thermal_populations(const EngineParams& params) {
    params.validate();
    const double x = params.delta_E / params.kT_S();
    const double log_a = -std::log1p(std::exp(-x));
    return {log_a, log_a - x}; // ln b = ln a - delta_E/kT_S
}

std::pair<double, double> log_conditionals(const EngineParams& params, double tau, double p) {
    const auto [log_a, log_b] = log_thermal_populations(params);
    const double sig2 = params.sigma2();
    const double lw0 = log_a - p * p / (2.0 * sig2);
    const double shifted = p + tau * std::sqrt(kB_theta);
    const double lw1 = log_b - shifted * shifted / (2.0 * sig2);
    const double lse = log_sum_exp(lw0, lw1);
    return {lw0 - lse, lw1 - lse};
}

OutcomeDistribution outcome_distribution(const EngineParams& params, double tau, double p) {
    params.validate();
    if (tau < 0.0) throw InvalidInput("outcome_distribution: tau must be >= 0");
    const auto pops = thermal_populations(params);
    const double sig2 = params.sigma2();
    const double norm = gaussian_norm(sig2);
    const double shift = tau * std::sqrt(kB_theta);

    OutcomeDistribution d{};
    d.tau = tau;
    d.p = p;
    d.P0_joint = pops.a * norm * std::exp(-p * p / (2.0 * sig2));
    d.P1_joint = pops.b * norm * std::exp(-(p + shift) * (p + shift) / (2.0 * sig2));
    d.Q = d.P0_joint + d.P1_joint;

    const auto [log_a, log_b] = log_thermal_populations(params);
    const double lw0 = log_a - p * p / (2.0 * sig2);
    const double lw1 = log_b - (p + shift) * (p + shift) / (2.0 * sig2);
    std::tie(d.P0_cond, d.P1_cond) = stable_conditional(lw0, lw1);
    return d;
}

std::pair<double, double> momentum_window(const EngineParams& params, double tau,
                                          const QuadratureConfig& cfg) {
    const double sigma = std::sqrt(params.sigma2());
    const double shift = tau * std::sqrt(kB_theta);
    return {-shift - cfg.window_sigmas * sigma, cfg.window_sigmas * sigma};
}

double mutual_information_limit(const EngineParams& params) {
    const auto pops = thermal_populations(params);
    const auto logs = log_thermal_populations(params);
    return -(pops.a * logs.log_a + pops.b * logs.log_b);
}

double mutual_information(const EngineParams& params, double tau,
                          const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    if (tau < 0.0) throw InvalidInput("mutual_information: tau must be >= 0");
    if (tau == 0.0) return 0.0;

    const auto pops = thermal_populations(params);
    const auto logs = log_thermal_populations(params);
    const double sig2 = params.sigma2();
    const double norm = gaussian_norm(sig2);
    const double shift = tau * std::sqrt(kB_theta);

    // I = -sum_i \int P_i(p) ln P_i(t|p) dp - H(a,b), folded into a single
    // integrand so the tau -> 0 limit vanishes pointwise.
    auto integrand = [&](double p) {
        const double lw0 = logs.log_a - p * p / (2.0 * sig2);
        const double lw1 = logs.log_b - (p + shift) * (p + shift) / (2.0 * sig2);
        const double lse = log_sum_exp(lw0, lw1);
        const double P0 = norm * std::exp(lw0);
        const double P1 = norm * std::exp(lw1);
        return P0 * (lw0 - lse - logs.log_a) + P1 * (lw1 - lse - logs.log_b);
    };

    // One panel per Gaussian: split at the midpoint between the means so
    // neither bump can hide between the nodes of a very wide first panel.
    const auto [lo, hi] = momentum_window(params, tau, cfg);
    const double mid = -0.5 * shift;
    double I = (mid > lo && mid < hi)
                   ? integrate(integrand, lo, mid, cfg) + integrate(integrand, mid, hi, cfg)
                   : integrate(integrand, lo, hi, cfg);

    const double H = -(pops.a * logs.log_a + pops.b * logs.log_b);
    const double slack = std::max(cfg.abs_tol, cfg.rel_tol * std::max(std::abs(I), H));
    if (I < 0.0 && I > -slack) I = 0.0;
    if (I > H && I < H + slack) I = H;
    return I;
}

double measurement_cost(const EngineParams& params, double tau) {
    params.validate();
    if (tau < 0.0) throw InvalidInput("measurement_cost: tau must be >= 0");
    const auto pops = thermal_populations(params);
    return 0.5 * pops.b * tau * tau * kB_theta;
}

double threshold_p_prime(const EngineParams& params, double tau) {
    params.validate();
    if (tau <= 0.0)
        throw DegenerateThreshold("threshold_p_prime: no crossing exists at tau = 0");
    const double sig2 = params.sigma2();
    const double shift = tau * std::sqrt(kB_theta);
    const double log_a_over_b = params.delta_E / params.kT_S();
    return -(sig2 / shift) * log_a_over_b - 0.5 * shift;
}

double ergotropy_outcome(const EngineParams& params, double tau, double p) {
    if (tau < 0.0) throw InvalidInput("ergotropy_outcome: tau must be >= 0");
    const auto [lc0, lc1] = log_conditionals(params, tau, p);
    if (lc1 <= lc0) return 0.0; // Theta(0) = 0: the balanced state is passive
    return params.delta_E * (std::exp(lc1) - std::exp(lc0));
}

double ergotropy_limit(const EngineParams& params) {
    return thermal_populations(params).b * params.delta_E;
}

double ergotropy_avg(const EngineParams& params, double tau,
                     const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    if (tau < 0.0) throw InvalidInput("ergotropy_avg: tau must be >= 0");
    if (tau == 0.0) return 0.0; // p' -> -inf, nothing is ever inverted

    const auto pops = thermal_populations(params);
    const double sigma = std::sqrt(params.sigma2());
    const double shift = tau * std::sqrt(kB_theta);
    const double pp = threshold_p_prime(params, tau);

    // The difference is >= 0 analytically; rounding of the two tails can
    // leave a negative speck, which downstream range checks reject.
    const double closed =
        std::max(0.0, params.delta_E * (pops.b * std_normal_cdf((pp + shift) / sigma) -
                                        pops.a * std_normal_cdf(pp / sigma)));

    // Independent route: quadrature of delta_E*(P1_joint - P0_joint) up to p'.
    const auto [lo, hi] = momentum_window(params, tau, cfg);
    (void)hi;
    double quad = 0.0;
    if (pp > lo) {
        auto integrand = [&](double p) {
            const auto d = outcome_distribution(params, tau, p);
            return params.delta_E * (d.P1_joint - d.P0_joint);
        };
        QuadratureConfig tight = cfg;
        tight.rel_tol = std::min(cfg.rel_tol, 1e-11);
        tight.abs_tol = std::min(cfg.abs_tol, 1e-15);
        tight.max_subdivisions = std::max(cfg.max_subdivisions, 400);
        quad = integrate(integrand, lo, pp, tight);
    }
    const double tol = 1e-9 * std::max({std::abs(closed), std::abs(quad), 1e-6});
    if (std::abs(closed - quad) > tol)
        throw IdentityViolation("ergotropy_avg: closed form " + std::to_string(closed) +
                                " and quadrature " + std::to_string(quad) +
                                " disagree beyond 1e-9 relative at tau = " +
                                std::to_string(tau));
    return closed;
}

double outcome_temperature(const EngineParams& params, double tau, double p) {
    if (tau < 0.0) throw InvalidInput("outcome_temperature: tau must be >= 0");
    const auto [lc0, lc1] = log_conditionals(params, tau, p);
    const double c0 = std::exp(lc0);
    const double c1 = std::exp(lc1);
    if (std::abs(c1 - c0) < 1e-14)
        throw DegenerateTemperature("outcome_temperature: conditionals equal at p = " +
                                    std::to_string(p) + " (T_p -> inf)");
    return (params.delta_E / k_boltzmann) / std::abs(lc1 - lc0);
}

double heat_capacity(double delta_E, double T) {
    if (!(delta_E > 0.0)) throw InvalidInput("heat_capacity: delta_E must be > 0");
    if (!(T > 0.0)) throw InvalidInput("heat_capacity: T must be > 0");
    const double x = delta_E / (k_boltzmann * T);
    const double e = std::exp(-x);
    const double denom = 1.0 + e;
    return k_boltzmann * x * x * e / (denom * denom);
}

double thermal_work_outcome(const EngineParams& params, double tau, double p) {
    params.validate();
    if (tau < 0.0) throw InvalidInput("thermal_work_outcome: tau must be >= 0");
    const auto logs = log_thermal_populations(params);
    const auto [lc0, lc1] = log_conditionals(params, tau, p);
    const double c0 = std::exp(lc0);
    const double c1 = std::exp(lc1);

    // ln a pairs with the larger conditional, ln b with the smaller; the two
    // branches coincide at the crossing so the tie is immaterial.
    const double cross = (lc1 > lc0) ? c0 * logs.log_b + c1 * logs.log_a
                                     : c1 * logs.log_b + c0 * logs.log_a;
    const double w = params.kT_S() * (x_ln_x(lc0) + x_ln_x(lc1) - cross);
    return std::max(w, 0.0); // KL form; clip roundoff at the zeros
}

double thermal_work_outcome_integral(const EngineParams& params, double tau, double p,
                                     const QuadratureConfig& cfg) {
    const double T_p = outcome_temperature(params, tau, p);
    const double T_S = params.T_S;
    if (T_p == T_S) return 0.0;
    auto integrand = [&](double T) {
        return heat_capacity(params.delta_E, T) * (T_S / T - 1.0);
    };
    const double sign = T_p < T_S ? 1.0 : -1.0;
    const double lo = std::min(T_p, T_S);
    const double hi = std::max(T_p, T_S);
    return sign * integrate(integrand, lo, hi, cfg);
}

double thermal_work_avg(const EngineParams& params, double tau,
                        const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    if (tau < 0.0) throw InvalidInput("thermal_work_avg: tau must be >= 0");
    if (tau == 0.0) return 0.0;

    auto integrand = [&](double p) {
        const auto d = outcome_distribution(params, tau, p);
        return d.Q * thermal_work_outcome(params, tau, p);
    };
    const auto [lo, hi] = momentum_window(params, tau, cfg);
    const double pp = threshold_p_prime(params, tau);
    if (pp > lo && pp < hi) {
        // Split at the derivative kink of the closed form.
        return integrate(integrand, lo, pp, cfg) + integrate(integrand, pp, hi, cfg);
    }
    return integrate(integrand, lo, hi, cfg);
}

TotalWork total_work(const EngineParams& params, double tau,
                     const QuadratureConfig& cfg) {
    const double W_erg = ergotropy_avg(params, tau, cfg);
    const double W_th = thermal_work_avg(params, tau, cfg);
    const double I = mutual_information(params, tau, cfg);
    TotalWork out{W_erg + W_th, params.kT_S() * I};
    const double tol = 1e-6 * std::max(out.TS_I, 1e-12);
    if (std::abs(out.W_tot - out.TS_I) > tol)
        throw IdentityViolation("total_work: |W_erg+W_th - T_S I| = " +
                                std::to_string(std::abs(out.W_tot - out.TS_I)) +
                                " meV exceeds tolerance at tau = " + std::to_string(tau));
    return out;
}

} // namespace qie
