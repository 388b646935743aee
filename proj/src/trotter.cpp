#include "qie/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qie/fft.hpp"

namespace qie {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double grid_sum_sq(const std::vector<std::complex<double>>& v, double dp) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s * dp;
}

// Boundary mass inside the outer 3 cells of one branch.
double edge_mass(const std::vector<std::complex<double>>& v, double dp) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t j = 0; j < 3; ++j) s += std::norm(v[j]) + std::norm(v[n - 1 - j]);
    return s * dp;
}

// eta(p) <- eta(p + delta), exact translation of the band-limited grid
// state: integer grid rotation when commensurate, otherwise one FFT
// round trip with the translation phase applied in the conjugate domain.
void shift_samples(std::vector<std::complex<double>>& v, double delta, double dp) {
    if (delta == 0.0) return;
    const double cells = delta / dp;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) < 1e-12 && std::abs(rounded) < static_cast<double>(v.size())) {
        const long m = static_cast<long>(rounded);
        if (m > 0)
            std::rotate(v.begin(), v.begin() + m, v.end());
        else
            std::rotate(v.begin(), v.end() + m, v.end());
        return;
    }
    detail::fft(v, true);
    const std::size_t n = v.size();
    for (std::size_t m = 0; m < n; ++m) {
        const double k = detail::dft_wavenumber(m, n, dp);
        v[m] *= std::complex<double>(std::cos(k * delta), std::sin(k * delta));
    }
    detail::fft(v, false);
}

// Mean of x over the position distribution of the stored amplitudes.
// Positions are the negated DFT wavenumbers for x = +i d/dp.
double position_mean(const std::vector<std::complex<double>>& v, double dp) {
    auto work = v;
    detail::fft(work, true);
    double wsum = 0.0, xsum = 0.0;
    const std::size_t n = work.size();
    for (std::size_t m = 0; m < n; ++m) {
        const double w = std::norm(work[m]);
        wsum += w;
        xsum += -detail::dft_wavenumber(m, n, dp) * w;
    }
    return xsum / wsum;
}

double moment(const TrotterState& s, int power) {
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t j = 0; j < s.grid.size(); ++j) {
        const double pk = power == 1 ? s.grid[j] : s.grid[j] * s.grid[j];
        m0 += pk * std::norm(s.branch0[j]);
        m1 += pk * std::norm(s.branch1[j]);
    }
    return (s.a * m0 + s.b * m1) * s.dp;
}

} // namespace

void TrotterConfig::validate() const {
    if (n_steps < 1) throw InvalidInput("TrotterConfig: n_steps must be >= 1");
    if (n_grid < 1024 || !detail::is_power_of_two(static_cast<std::size_t>(n_grid)))
        throw InvalidInput("TrotterConfig: n_grid must be a power of two >= 1024");
    if (hbar != 1.0) throw InvalidInput("TrotterConfig: hbar is fixed to 1");
    if (g != 0.0 && g != 1.0)
        throw InvalidInput("TrotterConfig: g must be 1 (or 0 to disable the coupling)");
    if (tau_max < 0.0) throw InvalidInput("TrotterConfig: tau_max must be >= 0");
    if (p_halfwidth < 0.0) throw InvalidInput("TrotterConfig: p_halfwidth must be >= 0");
}

double TrotterConfig::resolved_halfwidth(const EngineParams& params) const {
    if (p_halfwidth > 0.0) return p_halfwidth;
    const double sigma = std::sqrt(params.sigma2());
    return 8.0 * sigma + tau_max * std::sqrt(kB_theta) + 5.0 * sigma;
}

TrotterState initialize(const EngineParams& params, const TrotterConfig& cfg) {
    params.validate();
    cfg.validate();

    const double sigma = std::sqrt(params.sigma2());
    const double P = cfg.resolved_halfwidth(params);
    if (P < cfg.tau_max * std::sqrt(kB_theta) + 5.0 * sigma)
        throw GridTooNarrow("initialize: p_halfwidth " + std::to_string(P) +
                            " does not cover both Gaussian means plus 5 sigma");
    const double outside = 2.0 * std_normal_cdf(-P / sigma);
    if (outside > 1e-12)
        throw GridTooNarrow("initialize: " + std::to_string(outside) +
                            " of the initial Gaussian mass lies outside the grid");

    TrotterState s;
    const auto pops = thermal_populations(params);
    s.a = pops.a;
    s.b = pops.b;
    s.g = cfg.g;
    s.delta_E = params.delta_E;
    s.splitting = cfg.splitting;

    const std::size_t n = static_cast<std::size_t>(cfg.n_grid);
    s.dp = 2.0 * P / static_cast<double>(n);
    s.grid.resize(n);
    s.branch0.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double p = -P + s.dp * static_cast<double>(j);
        s.grid[j] = p;
        s.branch0[j] = std::pow(kTwoPi * params.sigma2(), -0.25) *
                       std::exp(-p * p / (4.0 * params.sigma2()));
    }
    const double norm = std::sqrt(grid_sum_sq(s.branch0, s.dp));
    for (auto& c : s.branch0) c /= norm;
    s.branch1 = s.branch0;
    s.initial_p2 = moment(s, 2);
    return s;
}

void step(TrotterState& state, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("step: dt must be > 0");
    if (state.g == 0.0) {
        // Coupling off: both branches are free; nothing moves in this picture.
        state.elapsed += dt;
        return;
    }

    const double delta = state.g * dt;
    const double t0 = state.elapsed;
    // Time at which the kinetic phase sees the momentum kick: midpoint for
    // the symmetric splitting, end of step for the first-order product.
    const double t_eval = state.splitting == Splitting::strang ? t0 + 0.5 * dt : t0 + dt;

    shift_samples(state.branch1, delta, state.dp);

    // Residual phases of this step in the interaction picture: the linear
    // term -t_eval*delta*p plus step constants (level phase and the delta^2
    // remainder; no observable sees the constants).
    const double const_phase =
        state.splitting == Splitting::strang
            ? -(0.5 * t0 + 0.125 * dt) * delta * delta - state.delta_E * dt
            : -0.5 * t_eval * delta * delta - state.delta_E * dt;
    for (std::size_t j = 0; j < state.grid.size(); ++j) {
        const double phase = -t_eval * delta * state.grid[j] + const_phase;
        state.branch1[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    state.elapsed += dt;

    const double mass = state.b * edge_mass(state.branch1, state.dp) +
                        state.a * edge_mass(state.branch0, state.dp);
    if (mass > 1e-10)
        throw AliasingDetected("step: " + std::to_string(mass) +
                               " probability mass within 3 cells of the grid edge at tau = " +
                               std::to_string(state.elapsed));
}

void evolve(TrotterState& state, double tau_target, int n_steps) {
    if (n_steps < 1) throw InvalidInput("evolve: n_steps must be >= 1");
    if (!(tau_target > state.elapsed))
        throw InvalidInput("evolve: tau_target must exceed elapsed time");
    const double dt = (tau_target - state.elapsed) / static_cast<double>(n_steps);
    for (int k = 0; k < n_steps; ++k) step(state, dt);
    state.elapsed = tau_target; // absorb accumulation roundoff
}

GridDistribution joint_momentum_distribution(const TrotterState& state) {
    GridDistribution d;
    const std::size_t n = state.grid.size();
    d.p = state.grid;
    d.P0.resize(n);
    d.P1.resize(n);
    d.Q.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        d.P0[j] = state.a * std::norm(state.branch0[j]);
        d.P1[j] = state.b * std::norm(state.branch1[j]);
        d.Q[j] = d.P0[j] + d.P1[j];
    }
    return d;
}

double mean_momentum(const TrotterState& state) { return moment(state, 1); }

double meter_energy_change(const TrotterState& state) {
    return 0.5 * (moment(state, 2) - state.initial_p2);
}

double measurement_cost_endpoint(const TrotterState& state) {
    if (state.g == 0.0) return 0.0;
    // <x>_psi = <x>_stored + t*<p>_stored, the exact unwinding of the
    // factored-out kinetic phase.
    double p1 = 0.0;
    for (std::size_t j = 0; j < state.grid.size(); ++j)
        p1 += state.grid[j] * std::norm(state.branch1[j]);
    p1 *= state.dp;
    const double x1 = position_mean(state.branch1, state.dp) + state.elapsed * p1;
    return -state.g * state.b * x1;
}

double branch_norm(const TrotterState& state, int branch) {
    if (branch != 0 && branch != 1) throw InvalidInput("branch_norm: branch must be 0 or 1");
    return grid_sum_sq(branch == 0 ? state.branch0 : state.branch1, state.dp);
}

} // namespace qie
