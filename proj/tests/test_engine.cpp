#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qie/engine.hpp"

using namespace qie;

namespace {

EngineParams reference_params() {
    // T_S = T_M = 300 K, delta_E = k_B T_S: the canonical operating point.
    EngineParams p;
    p.T_S = 300.0;
    p.T_M = 300.0;
    p.delta_E = k_boltzmann * 300.0;
    return p;
}

// Frozen with 40-digit arithmetic: a = 1/(1+e^-1).
constexpr double kA = 0.7310585786300049;
constexpr double kB_pop = 0.2689414213699951;
constexpr double kH_nats = 0.5822031088882180;     // -(a ln a + b ln b)
constexpr double kBdE = 6.952673567820639;         // b * k_B * 300
constexpr double kWmeas10 = 13.447071068499756;    // b * 10^2 / 2

} // namespace

TEST_CASE("thermal_populations: frozen point and limits") {
    const auto pops = thermal_populations(reference_params());
    CHECK(pops.a == doctest::Approx(kA).epsilon(1e-14));
    CHECK(pops.b == doctest::Approx(kB_pop).epsilon(1e-14));
    CHECK(pops.a + pops.b == 1.0);

    EngineParams frozen = reference_params();
    frozen.delta_E = 1e4 * k_boltzmann * frozen.T_S;
    const auto cold = thermal_populations(frozen);
    CHECK(cold.a == 1.0);
    CHECK(cold.b <= 1e-300);

    EngineParams hot = reference_params();
    hot.T_S = 1e10;
    hot.delta_E = 1.0;
    const auto sym = thermal_populations(hot);
    CHECK(std::abs(sym.a - 0.5) <= 1e-9);
    CHECK(std::abs(sym.b - 0.5) <= 1e-9);
}

TEST_CASE("thermal_populations: detailed balance to 1e-14 relative") {
    for (double rel : {0.3, 1.0, 2.5, 7.0}) {
        EngineParams p = reference_params();
        p.delta_E = rel * k_boltzmann * p.T_S;
        const auto pops = thermal_populations(p);
        const double expected = std::exp(-p.delta_E / p.kT_S());
        CHECK(pops.b / pops.a == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("params validation names the offending field") {
    EngineParams p = reference_params();
    p.T_M = -5.0;
    CHECK_THROWS_WITH_AS(p.validate(),
                         doctest::Contains("T_M"), InvalidInput);
}

TEST_CASE("outcome_distribution: tau = 0 conditionals are the populations") {
    const auto p = reference_params();
    const auto pops = thermal_populations(p);
    for (double x : {-30.0, -2.0, 0.0, 5.0, 40.0}) {
        const auto d = outcome_distribution(p, 0.0, x);
        CHECK(d.P0_cond == doctest::Approx(pops.a).epsilon(1e-14));
        CHECK(d.P1_cond == doctest::Approx(pops.b).epsilon(1e-14));
        CHECK(d.P0_cond + d.P1_cond == 1.0);
        CHECK(d.Q == doctest::Approx(d.P0_joint + d.P1_joint));
    }
}

TEST_CASE("outcome_distribution: symmetry point of equal-weight Gaussians") {
    EngineParams p = reference_params();
    p.T_S = 1e14; // a = b = 1/2 to ~1e-12
    const double tau = 4.0;
    const auto d = outcome_distribution(p, tau, -tau * std::sqrt(kB_theta) / 2.0);
    CHECK(d.P0_cond == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.P1_cond == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("outcome_distribution: deep-tail conditionals stay finite and exact") {
    const auto p = reference_params();
    const double sig2 = p.sigma2();
    const double tau = 10.0;
    // At p = 0 the weights are a and b*exp(-tau^2/(2 sigma^2)).
    const auto d = outcome_distribution(p, tau, 0.0);
    const double w1_over_w0 = (kB_pop / kA) * std::exp(-100.0 / (2.0 * sig2));
    CHECK(d.P1_cond / d.P0_cond == doctest::Approx(w1_over_w0).epsilon(1e-12));

    // Far into the branch-1 tail nothing underflows to NaN.
    const auto far = outcome_distribution(p, tau, 300.0);
    CHECK(far.P0_cond == 1.0);
    CHECK(far.P1_cond >= 0.0);
    CHECK(std::isfinite(far.P1_cond));
}

TEST_CASE("normalization and marginal consistency under the declared window") {
    const auto p = reference_params();
    const auto pops = thermal_populations(p);
    QuadratureConfig cfg;
    for (double tau : {0.5, 3.0, 10.0, 40.0}) {
        const auto [lo, hi] = momentum_window(p, tau, cfg);
        const double q = integrate(
            [&](double x) { return outcome_distribution(p, tau, x).Q; }, lo, hi, cfg);
        CHECK(std::abs(q - 1.0) <= 1e-9);
        const double m0 = integrate(
            [&](double x) { return outcome_distribution(p, tau, x).P0_joint; }, lo, hi, cfg);
        const double m1 = integrate(
            [&](double x) { return outcome_distribution(p, tau, x).P1_joint; }, lo, hi, cfg);
        CHECK(std::abs(m0 - pops.a) <= 1e-9);
        CHECK(std::abs(m1 - pops.b) <= 1e-9);
    }
}

TEST_CASE("mutual_information: zero, saturation, monotone") {
    const auto p = reference_params();
    CHECK(mutual_information(p, 0.0) == 0.0);

    const double I_inf = mutual_information(p, 200.0);
    CHECK(std::abs(I_inf - kH_nats) <= 1e-8);
    CHECK(mutual_information_limit(p) == doctest::Approx(kH_nats).epsilon(1e-14));

    const double I1 = mutual_information(p, 1.0);
    const double I2 = mutual_information(p, 2.0);
    const double I5 = mutual_information(p, 5.0);
    CHECK(I1 < I2);
    CHECK(I2 < I5);
    for (double I : {I1, I2, I5}) {
        CHECK(I >= 0.0);
        CHECK(I <= kH_nats);
    }
}

TEST_CASE("measurement_cost: quadratic in tau") {
    const auto p = reference_params();
    CHECK(measurement_cost(p, 0.0) == 0.0);
    CHECK(measurement_cost(p, 10.0) == doctest::Approx(kWmeas10).epsilon(1e-14));
    CHECK(measurement_cost(p, 2.0) == doctest::Approx(4.0 * measurement_cost(p, 1.0)));
}

TEST_CASE("threshold_p_prime: closed form against a bisection oracle") {
    const auto p = reference_params();
    const double tau = 10.0;
    const double pp = threshold_p_prime(p, tau);
    CHECK(pp == doctest::Approx(-7.5851999786435).epsilon(1e-12));

    // Bisection on P1_cond - P0_cond, fully independent of the closed form.
    double lo = -60.0, hi = 10.0;
    auto diff = [&](double x) {
        const auto d = outcome_distribution(p, tau, x);
        return d.P1_cond - d.P0_cond;
    };
    REQUIRE(diff(lo) > 0.0);
    REQUIRE(diff(hi) < 0.0);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(pp == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));

    const auto d = outcome_distribution(p, tau, pp);
    CHECK(std::abs(d.P0_cond - 0.5) <= 1e-10);
    CHECK(std::abs(d.P1_cond - 0.5) <= 1e-10);
}

TEST_CASE("threshold_p_prime: equal weights and the tau -> 0 divergence") {
    EngineParams sym = reference_params();
    sym.T_S = 1e14;
    const double tau = 3.0;
    CHECK(threshold_p_prime(sym, tau) ==
          doctest::Approx(-tau * std::sqrt(kB_theta) / 2.0).epsilon(1e-9));

    const auto p = reference_params();
    const double p1 = threshold_p_prime(p, 0.01);
    const double p2 = threshold_p_prime(p, 0.1);
    const double p3 = threshold_p_prime(p, 1.0);
    CHECK(p1 < p2);
    CHECK(p2 < p3);
    CHECK(p3 < 0.0);

    CHECK_THROWS_AS(threshold_p_prime(p, 0.0), DegenerateThreshold);
}

TEST_CASE("ergotropy_outcome: passive above p', saturates below") {
    const auto p = reference_params();
    const double tau = 8.0;
    const double pp = threshold_p_prime(p, tau);
    // p' itself carries one rounding step of conditional imbalance.
    CHECK(std::abs(ergotropy_outcome(p, tau, pp)) <= 1e-12);
    for (double off : {0.5, 3.0, 20.0})
        CHECK(ergotropy_outcome(p, tau, pp + off) == 0.0);
    for (double x : {-40.0, -3.0, 0.0, 15.0})
        CHECK(ergotropy_outcome(p, 0.0, x) == 0.0);

    const double sigma = std::sqrt(p.sigma2());
    const double deep = -40.0 * sigma - tau * std::sqrt(kB_theta);
    CHECK(ergotropy_outcome(p, tau, deep) == doctest::Approx(p.delta_E).epsilon(1e-12));
}

TEST_CASE("ergotropy_avg: limits and bounds") {
    const auto p = reference_params();
    CHECK(ergotropy_avg(p, 0.0) == 0.0);
    CHECK(ergotropy_limit(p) == doctest::Approx(kBdE).epsilon(1e-14));
    CHECK(ergotropy_avg(p, 200.0) == doctest::Approx(kBdE).epsilon(1e-6));

    double prev = -1.0;
    for (double tau : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
        const double w = ergotropy_avg(p, tau);
        CHECK(w >= 0.0);
        CHECK(w <= kBdE * (1.0 + 1e-12));
        CHECK(w >= prev - 1e-12);
        prev = w;
    }
}

TEST_CASE("outcome_temperature: thermal, divergent, and pure limits") {
    const auto p = reference_params();
    for (double x : {-8.0, 0.0, 11.0})
        CHECK(outcome_temperature(p, 0.0, x) == doctest::Approx(p.T_S).epsilon(1e-12));

    const double tau = 6.0;
    const double pp = threshold_p_prime(p, tau);
    CHECK_THROWS_AS(outcome_temperature(p, tau, pp), DegenerateTemperature);

    const double sigma = std::sqrt(p.sigma2());
    const double T30 = outcome_temperature(p, tau, -30.0 * sigma - tau);
    const double T60 = outcome_temperature(p, tau, -60.0 * sigma - tau);
    CHECK(T30 > 0.0);
    CHECK(T30 < 10.0); // K; nearly pure already
    CHECK(T60 < T30);  // and heading to zero
}

TEST_CASE("heat_capacity: freezing, saturation, Schottky peak by scan") {
    const double dE = k_boltzmann * 300.0;
    // x = dE/(k_B T) = 700 -> frozen out.
    CHECK(heat_capacity(dE, dE / (700.0 * k_boltzmann)) <= 1e-290);
    // x = 1e-8 -> ~ k_B x^2 / 4.
    const double hot = heat_capacity(dE, dE / (1e-8 * k_boltzmann));
    CHECK(hot == doctest::Approx(k_boltzmann * 1e-16 / 4.0).epsilon(1e-6));

    // Scan x in (0,10): locate the peak, then pin it down independently by
    // bisecting the finite-difference derivative.
    double best_x = 0.0, best_c = -1.0;
    for (double x = 0.05; x <= 10.0; x += 0.001) {
        const double T = dE / (k_boltzmann * x);
        const double c = heat_capacity(dE, T);
        if (c > best_c) {
            best_c = c;
            best_x = x;
        }
    }
    auto C_of_x = [&](double x) { return heat_capacity(dE, dE / (k_boltzmann * x)); };
    auto slope = [&](double x) {
        const double h = 1e-6;
        return (C_of_x(x + h) - C_of_x(x - h)) / (2.0 * h);
    };
    double lo = 2.0, hi = 3.0;
    REQUIRE(slope(lo) > 0.0);
    REQUIRE(slope(hi) < 0.0);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    CHECK(best_x == doctest::Approx(root).epsilon(1e-3));
    CHECK(root == doctest::Approx(2.39935728).epsilon(1e-6));
}

TEST_CASE("thermal_work_outcome: zero at tau = 0, finite at p', nonnegative") {
    const auto p = reference_params();
    for (double x : {-20.0, 0.0, 9.0})
        CHECK(thermal_work_outcome(p, 0.0, x) <= 1e-12); // zero up to roundoff

    const double tau = 7.0;
    const double pp = threshold_p_prime(p, tau);
    const auto pops = thermal_populations(p);
    const double expected =
        p.kT_S() * (std::log(0.5) - 0.5 * std::log(pops.b) - 0.5 * std::log(pops.a));
    CHECK(thermal_work_outcome(p, tau, pp) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(expected > 0.0);

    for (double t : {0.3, 2.0, 11.0})
        for (double x : {-35.0, -9.0, -1.0, 4.0, 28.0})
            CHECK(thermal_work_outcome(p, t, x) >= 0.0);
}

TEST_CASE("thermal_work_outcome: closed form vs direct temperature integral") {
    const auto p = reference_params();
    const double sigma = std::sqrt(p.sigma2());
    int sampled = 0;
    for (double tau : {0.5, 2.0, 5.0, 10.0}) {
        const double pp = threshold_p_prime(p, tau);
        for (double off : {-3.0, -1.0, -0.05, 0.5, 2.0}) {
            const double x = pp + off * sigma;
            if (std::abs(x - pp) < 1e-6 * sigma) continue;
            const double closed = thermal_work_outcome(p, tau, x);
            const double direct = thermal_work_outcome_integral(p, tau, x);
            const double scale = std::max(std::abs(closed), std::abs(direct));
            CHECK(std::abs(closed - direct) <= 1e-8 * scale);
            ++sampled;
        }
    }
    CHECK(sampled == 20);
}

TEST_CASE("thermal_work_avg: zero, identity, saturation") {
    const auto p = reference_params();
    CHECK(thermal_work_avg(p, 0.0) == 0.0);

    for (double tau : {0.5, 2.0, 8.0, 30.0}) {
        const double lhs = thermal_work_avg(p, tau);
        const double rhs = p.kT_S() * mutual_information(p, tau) - ergotropy_avg(p, tau);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
    }

    const double w_inf = thermal_work_avg(p, 200.0);
    CHECK(w_inf == doctest::Approx(p.kT_S() * kH_nats - kBdE).epsilon(1e-6));
}

TEST_CASE("pointwise invariants hold across random (tau, p) draws") {
    // Deterministic LCG so failures are reproducible.
    std::uint64_t s = 0x9e3779b97f4a7c15ull;
    auto next = [&s]() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) / 9007199254740992.0; // [0,1)
    };
    for (int trial = 0; trial < 500; ++trial) {
        EngineParams p;
        p.T_S = 50.0 + 450.0 * next();
        p.T_M = 50.0 + 450.0 * next();
        p.delta_E = (0.2 + 3.0 * next()) * k_boltzmann * p.T_S;
        const double tau = 50.0 * next();
        const double sigma = std::sqrt(p.sigma2());
        const double x = -tau - 10.0 * sigma + (tau + 20.0 * sigma) * next();

        const auto d = outcome_distribution(p, tau, x);
        CHECK(d.P0_cond + d.P1_cond == 1.0);
        CHECK(d.Q >= 0.0);
        CHECK(d.P0_joint >= 0.0);
        CHECK(d.P1_joint >= 0.0);

        const double w = ergotropy_outcome(p, tau, x);
        CHECK(w >= 0.0);
        CHECK(w <= p.delta_E);

        CHECK(thermal_work_outcome(p, tau, x) >= 0.0);
    }
}

TEST_CASE("total_work: the master identity") {
    const auto p = reference_params();
    const auto zero = total_work(p, 0.0);
    CHECK(zero.W_tot == 0.0);
    CHECK(zero.TS_I == 0.0);

    const auto tw = total_work(p, 5.0);
    CHECK(std::abs(tw.W_tot - tw.TS_I) <= 1e-6 * std::max(tw.TS_I, 1e-12));
}
