#pragma once

#include <optional>

#include "qie/numerics.hpp"

namespace qie {

/// Boltzmann constant in meV/K.
inline constexpr double k_boltzmann = 0.08617333262145;

/// Reference energy scale k_B*Theta in meV. The dimensionless time is
/// tau = g*t_m/sqrt(k_B*Theta), so the meter momentum kick g*t_m equals
/// tau*sqrt(k_B*Theta) = tau in sqrt(meV) units.
inline constexpr double kB_theta = 1.0;

/// Physical inputs of the engine. Energies in meV, temperatures in K,
/// momenta in sqrt(meV) (mass-weighted, so p^2/2 is an energy).
struct EngineParams {
    double delta_E = k_boltzmann * 300.0; ///< TLS gap in meV
    double T_S = 300.0;                   ///< system temperature in K
    double T_M = 300.0;                   ///< meter temperature in K

    void validate() const;

    /// Meter momentum variance sigma^2 = k_B*T_M in meV.
    [[nodiscard]] double sigma2() const { return k_boltzmann * T_M; }
    /// k_B*T_S in meV.
    [[nodiscard]] double kT_S() const { return k_boltzmann * T_S; }
};

/// Thermal populations of the two-level system: a ground, b excited,
/// a + b = 1 and b/a = exp(-delta_E/(k_B T_S)).
struct ThermalTLS {
    double a;
    double b;
};

/// Joint densities, their marginal, and the conditional TLS populations
/// at one (tau, p).
struct OutcomeDistribution {
    double tau;
    double p;
    double P0_joint; ///< a * N(p; 0, sigma^2), 1/sqrt(meV)
    double P1_joint; ///< b * N(p; -tau, sigma^2), 1/sqrt(meV)
    double Q;        ///< P0_joint + P1_joint
    double P0_cond;  ///< P0_joint / Q, computed in log space
    double P1_cond;  ///< P1_joint / Q; P0_cond + P1_cond = 1 exactly
};

/// Every per-cycle scalar. Energies in meV; I in nats; eta/Y/Pi
/// dimensionless. Optional fields are undefined at tau = 0.
struct CycleMetrics {
    double tau = 0.0;
    double I_nats = 0.0;
    double W_meas = 0.0;
    double W_erg = 0.0;
    double W_th = 0.0;
    double W_tot = 0.0;
    double TS_I = 0.0;
    double Y = 0.0;
    std::optional<double> eta_erg;
    std::optional<double> eta_max;
    std::optional<double> Pi_tilde;
};

ThermalTLS thermal_populations(const EngineParams& params);

/// Log-populations ln a, ln b, evaluated without forming 1+e^{-x} when x
/// is large (keeps ln b exact down to b ~ 1e-300).
struct LogPopulations {
    double log_a;
    double log_b;
};
LogPopulations log_thermal_populations(const EngineParams& params);

OutcomeDistribution outcome_distribution(const EngineParams& params, double tau, double p);

/// Log conditional populations ln P_i(t_m|p); the stable core shared by
/// every closed form below.
std::pair<double, double> log_conditionals(const EngineParams& params, double tau, double p);

/// Information gain S(0) - S(t_m) in nats (divide out k_B to make the
/// entropy dimensionless), by quadrature over the outcome distribution.
/// Clamped to [0, H(a,b)] only when the violation is within quadrature
/// tolerance.
double mutual_information(const EngineParams& params, double tau,
                          const QuadratureConfig& cfg = {});

/// tau -> infinity limit of mutual_information: the binary entropy
/// -(a ln a + b ln b) in nats.
double mutual_information_limit(const EngineParams& params);

/// Energy of switching the coupling on and off: b*tau^2*k_B*Theta/2 in meV.
double measurement_cost(const EngineParams& params, double tau);

/// Outcome p' where the conditionals cross 1/2. Throws DegenerateThreshold
/// at tau = 0.
double threshold_p_prime(const EngineParams& params, double tau);

/// Ergotropy of the post-measurement state for outcome p:
/// delta_E*(P1c - P0c) if the populations are inverted, else 0.
double ergotropy_outcome(const EngineParams& params, double tau, double p);

/// Outcome-averaged ergotropy in meV. Evaluated from the closed form
/// delta_E*[b*Phi((p'+tau)/sigma) - a*Phi(p'/sigma)] and cross-checked
/// against direct quadrature of the integrand to 1e-9 relative; returns
/// the closed form. Throws IdentityViolation if the two routes disagree.
double ergotropy_avg(const EngineParams& params, double tau,
                     const QuadratureConfig& cfg = {});

/// tau -> infinity limit of ergotropy_avg: b*delta_E in meV.
double ergotropy_limit(const EngineParams& params);

/// Temperature of the post-measurement conditional state in K. Throws
/// DegenerateTemperature within 1e-14 of the crossing point p'.
double outcome_temperature(const EngineParams& params, double tau, double p);

/// TLS heat capacity C(T) in meV/K, in the stable form
/// k_B*x^2*e^{-x}/(1+e^{-x})^2 with x = delta_E/(k_B T).
double heat_capacity(double delta_E, double T);

/// Maximum Carnot work recovered while the outcome state rethermalizes
/// with the T_S bath, from the closed form in conditional populations
/// (regular at p = p'). Always >= 0.
double thermal_work_outcome(const EngineParams& params, double tau, double p);

/// Test-only reference route for thermal_work_outcome: direct quadrature
/// of C(T)(T_S/T - 1) between T_p and T_S. Singular at p = p'.
double thermal_work_outcome_integral(const EngineParams& params, double tau, double p,
                                     const QuadratureConfig& cfg = {});

/// Outcome-averaged rethermalization work in meV.
double thermal_work_avg(const EngineParams& params, double tau,
                        const QuadratureConfig& cfg = {});

struct TotalWork {
    double W_tot; ///< ergotropy_avg + thermal_work_avg
    double TS_I;  ///< k_B * T_S * mutual_information
};

/// Both sides of the master identity W_erg + W_th = T_S I. Throws
/// IdentityViolation if they differ by more than 1e-6*max(TS_I, 1e-12).
TotalWork total_work(const EngineParams& params, double tau,
                     const QuadratureConfig& cfg = {});

/// Integration window [lo, hi] covering both Gaussian means plus
/// cfg.window_sigmas standard deviations.
std::pair<double, double> momentum_window(const EngineParams& params, double tau,
                                          const QuadratureConfig& cfg);

} // namespace qie
