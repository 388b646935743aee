#pragma once

#include <functional>
#include <vector>

#include "qie/engine.hpp"

namespace qie {

/// W_erg / (T_S I); 0 when both vanish (the tau = 0 limit).
double yield_ratio(double W_erg, double TS_I);

/// (W_out - W_meas)/(W_out + W_meas) in [-1, 1]. Caller picks
/// W_out = W_erg (eta_erg) or W_out = k_B T_S I (eta_max). Throws
/// UndefinedEfficiency when nothing moved at all.
double efficiency(double W_out, double W_meas);

/// Dimensionless power bound (W_erg - W_meas)/(tau * 1 meV); physical
/// power recovers as Pi = Pi_tilde * g * sqrt(k_B*Theta) for any g.
/// Throws UndefinedPower at tau = 0. May be negative.
double power_bound(double W_erg, double W_meas, double tau);

/// tau -> 0+ limit of the T_S I based efficiency:
/// (a*T_S/T_M - 1)/(a*T_S/T_M + 1).
double eta_max_zero_limit(const EngineParams& params);

struct ScanResult {
    double tau_star;
    double f_star;
    bool interior; ///< false when the grid maximum sat on a boundary
};

/// Grid argmax of f refined by golden-section search on the bracketing
/// interval to relative tau tolerance 1e-4. A boundary maximum is
/// reported via interior = false, not an error.
ScanResult argmax_scan(const std::function<double(double)>& f,
                       const std::vector<double>& grid);

/// One full engine cycle: every closed-form metric at (params, tau).
/// eta and Pi fields are empty at tau = 0.
CycleMetrics evaluate_cycle(const EngineParams& params, double tau,
                            const QuadratureConfig& cfg = {});

} // namespace qie
