#include "qie/metrics.hpp"

#include <cmath>
#include <string>

namespace qie {

double yield_ratio(double W_erg, double TS_I) {
    if (TS_I < 0.0) throw InvalidInput("yield_ratio: TS_I must be >= 0");
    if (TS_I == 0.0) return 0.0;
    return W_erg / TS_I;
}

double efficiency(double W_out, double W_meas) {
    if (W_out < 0.0 || W_meas < 0.0)
        throw InvalidInput("efficiency: work terms must be >= 0");
    const double denom = W_out + W_meas;
    if (denom == 0.0)
        throw UndefinedEfficiency("efficiency: W_out + W_meas = 0 (tau = 0)");
    return (W_out - W_meas) / denom;
}

double power_bound(double W_erg, double W_meas, double tau) {
    if (tau <= 0.0) throw UndefinedPower("power_bound: undefined at tau = 0");
    return (W_erg - W_meas) / (tau * kB_theta);
}

double eta_max_zero_limit(const EngineParams& params) {
    const double x = thermal_populations(params).a * params.T_S / params.T_M;
    return (x - 1.0) / (x + 1.0);
}

ScanResult argmax_scan(const std::function<double(double)>& f,
                       const std::vector<double>& grid) {
    if (grid.size() < 3) throw InvalidInput("argmax_scan: grid needs >= 3 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw InvalidInput("argmax_scan: grid must be strictly increasing");

    std::size_t best = 0;
    double fbest = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double fi = f(grid[i]);
        if (fi > fbest) {
            fbest = fi;
            best = i;
        }
    }
    if (best == 0 || best + 1 == grid.size())
        return {grid[best], fbest, false};

    // Golden-section search on the bracketing interval.
    constexpr double inv_phi = 0.6180339887498949;
    double lo = grid[best - 1], hi = grid[best + 1];
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while ((hi - lo) > 1e-4 * std::max(std::abs(lo), std::abs(hi))) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double xm = 0.5 * (lo + hi);
    const double fm = f(xm);
    if (fm >= fbest) return {xm, fm, true};
    return {grid[best], fbest, true};
}

CycleMetrics evaluate_cycle(const EngineParams& params, double tau,
                            const QuadratureConfig& cfg) {
    params.validate();
    if (tau < 0.0) throw InvalidInput("evaluate_cycle: tau must be >= 0");

    CycleMetrics m;
    m.tau = tau;
    m.W_meas = measurement_cost(params, tau);
    if (tau == 0.0) return m; // zeros, eta/Pi undefined

    m.I_nats = mutual_information(params, tau, cfg);
    m.W_erg = ergotropy_avg(params, tau, cfg);
    m.W_th = thermal_work_avg(params, tau, cfg);
    m.W_tot = m.W_erg + m.W_th;
    m.TS_I = params.kT_S() * m.I_nats;

    const double tol = 1e-6 * std::max(m.TS_I, 1e-12);
    if (std::abs(m.W_tot - m.TS_I) > tol)
        throw IdentityViolation("evaluate_cycle: |W_tot - T_S I| = " +
                                std::to_string(std::abs(m.W_tot - m.TS_I)) +
                                " meV exceeds tolerance at tau = " + std::to_string(tau));

    m.Y = yield_ratio(m.W_erg, m.TS_I);
    m.eta_erg = efficiency(m.W_erg, m.W_meas);
    m.eta_max = efficiency(m.TS_I, m.W_meas);
    m.Pi_tilde = power_bound(m.W_erg, m.W_meas, tau);
    return m;
}

} // namespace qie
