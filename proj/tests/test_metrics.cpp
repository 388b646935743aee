#include <doctest.h>

#include <cmath>
#include <vector>

#include "qie/metrics.hpp"

using namespace qie;

namespace {

EngineParams reference_params() {
    EngineParams p;
    p.T_S = 300.0;
    p.T_M = 300.0;
    p.delta_E = k_boltzmann * 300.0;
    return p;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1.0);
    return v;
}

} // namespace

TEST_CASE("yield_ratio: zero limit and saturation") {
    CHECK(yield_ratio(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(yield_ratio(1.0, -0.5), InvalidInput);

    // Ratio of the two saturation limits, frozen to 0.4619374532086730.
    const auto p = reference_params();
    const double y_inf = ergotropy_limit(p) / (p.kT_S() * mutual_information_limit(p));
    CHECK(y_inf == doctest::Approx(0.4619374532086730).epsilon(1e-13));

    const auto m = evaluate_cycle(p, 200.0);
    CHECK(m.Y == doctest::Approx(y_inf).epsilon(1e-6));
}

TEST_CASE("efficiency: anchors and failure mode") {
    CHECK(efficiency(3.2, 0.0) == 1.0);
    CHECK(efficiency(1.7, 1.7) == 0.0);
    CHECK_THROWS_AS(efficiency(0.0, 0.0), UndefinedEfficiency);
    CHECK_THROWS_AS(efficiency(-1.0, 0.5), InvalidInput);
}

TEST_CASE("eta_max small-tau limit confirmed numerically at tau = 1e-3") {
    const auto p = reference_params();
    const double limit = eta_max_zero_limit(p);
    CHECK(limit == doctest::Approx(-0.15536240349696361).epsilon(1e-12));

    const double tau = 1e-3;
    const double TS_I = p.kT_S() * mutual_information(p, tau);
    const double eta = efficiency(TS_I, measurement_cost(p, tau));
    CHECK(eta == doctest::Approx(limit).epsilon(1e-6));

    EngineParams cold = p;
    cold.T_M = 100.0;
    const double TS_I_c = cold.kT_S() * mutual_information(cold, tau);
    CHECK(efficiency(TS_I_c, measurement_cost(cold, tau)) ==
          doctest::Approx(eta_max_zero_limit(cold)).epsilon(1e-6));
}

TEST_CASE("power_bound: limits and signs") {
    CHECK_THROWS_AS(power_bound(1.0, 0.5, 0.0), UndefinedPower);

    const auto p = reference_params();
    const double tau0 = 1e-3;
    const double pi0 = power_bound(ergotropy_avg(p, tau0), measurement_cost(p, tau0), tau0);
    CHECK(std::abs(pi0) <= 1e-3);

    const double pi100 =
        power_bound(ergotropy_avg(p, 100.0), measurement_cost(p, 100.0), 100.0);
    CHECK(pi100 < 0.0);

    CHECK(power_bound(2.0, 1.0, 4.0) == doctest::Approx(0.25));
    CHECK(power_bound(1.0, 2.0, 4.0) == doctest::Approx(-0.25));
}

TEST_CASE("power_bound: positive interior peak for a cold meter") {
    EngineParams cold = reference_params();
    cold.T_M = 50.0;
    auto pi = [&](double tau) {
        return power_bound(ergotropy_avg(cold, tau), measurement_cost(cold, tau), tau);
    };
    const auto res = argmax_scan(pi, linspace(0.5, 20.0, 40));
    CHECK(res.interior);
    CHECK(res.f_star > 0.0);
    CHECK(res.tau_star > 1.0);
    CHECK(res.tau_star < 10.0);
}

TEST_CASE("power and efficiency maxima grow as the meter cools") {
    const auto grid = linspace(1.0, 20.0, 39);
    double pi_max[2], eta_max_val[2];
    int i = 0;
    for (double T_M : {100.0, 300.0}) {
        EngineParams p = reference_params();
        p.T_M = T_M;
        auto pi = [&](double tau) {
            return power_bound(ergotropy_avg(p, tau), measurement_cost(p, tau), tau);
        };
        auto eta = [&](double tau) {
            return efficiency(ergotropy_avg(p, tau), measurement_cost(p, tau));
        };
        pi_max[i] = argmax_scan(pi, grid).f_star;
        eta_max_val[i] = argmax_scan(eta, grid).f_star;
        ++i;
    }
    CHECK(pi_max[0] > pi_max[1]);      // T_M = 100 beats T_M = 300
    CHECK(eta_max_val[0] > eta_max_val[1]);
}

TEST_CASE("argmax_scan: parabola and boundary reporting") {
    auto f = [](double x) { return -(x - 3.0) * (x - 3.0); };
    const auto res = argmax_scan(f, linspace(0.0, 10.0, 11));
    CHECK(res.interior);
    CHECK(std::abs(res.tau_star - 3.0) <= 1e-3);
    CHECK(res.f_star == doctest::Approx(0.0).epsilon(1e-6));

    auto rising = [](double x) { return x; };
    const auto edge = argmax_scan(rising, linspace(0.0, 10.0, 11));
    CHECK_FALSE(edge.interior);
    CHECK(edge.tau_star == 10.0);

    CHECK_THROWS_AS(argmax_scan(f, {1.0, 2.0}), InvalidInput);
    CHECK_THROWS_AS(argmax_scan(f, {1.0, 1.0, 2.0}), InvalidInput);
}

TEST_CASE("dI/dtau peaks near sqrt(2 k_B T_M) in tau units") {
    const auto p = reference_params();
    auto didtau = [&](double tau) {
        const double h = 1e-3 * tau;
        return (mutual_information(p, tau + h) - mutual_information(p, tau - h)) / (2.0 * h);
    };
    const auto res = argmax_scan(didtau, linspace(0.5, 20.0, 40));
    const double target = std::sqrt(2.0 * k_boltzmann * p.T_M / kB_theta);
    CHECK(res.interior);
    CHECK(std::abs(res.tau_star - target) <= 0.25 * target);
}

TEST_CASE("evaluate_cycle: tau = 0 row and defined-range invariants") {
    const auto p = reference_params();
    const auto zero = evaluate_cycle(p, 0.0);
    CHECK(zero.I_nats == 0.0);
    CHECK(zero.W_meas == 0.0);
    CHECK(zero.W_erg == 0.0);
    CHECK(zero.W_th == 0.0);
    CHECK(zero.Y == 0.0);
    CHECK_FALSE(zero.eta_erg.has_value());
    CHECK_FALSE(zero.eta_max.has_value());
    CHECK_FALSE(zero.Pi_tilde.has_value());

    for (double tau : {0.2, 1.0, 4.0, 12.0, 60.0}) {
        const auto m = evaluate_cycle(p, tau);
        CHECK(m.Y >= 0.0);
        CHECK(m.Y <= 1.0);
        REQUIRE(m.eta_erg.has_value());
        REQUIRE(m.eta_max.has_value());
        REQUIRE(m.Pi_tilde.has_value());
        CHECK(*m.eta_erg <= *m.eta_max + 1e-12);
        const double sign = m.W_erg - m.W_meas;
        if (sign > 0.0) CHECK(*m.Pi_tilde > 0.0);
        if (sign < 0.0) CHECK(*m.Pi_tilde < 0.0);
        CHECK(std::abs(m.W_tot - m.TS_I) <= 1e-6 * std::max(m.TS_I, 1e-12));
    }
}
