#include "qie/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qie {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw InvalidInput("QuadratureConfig: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw InvalidInput("QuadratureConfig: rel_tol must be > 0");
    if (max_subdivisions < 1) throw InvalidInput("QuadratureConfig: max_subdivisions must be >= 1");
    if (!(window_sigmas >= 5.0)) throw InvalidInput("QuadratureConfig: window_sigmas must be >= 5");
}

namespace {

// 15-point Kronrod nodes on [-1,1] with the embedded 7-point Gauss rule.
constexpr int kGK = 15;
constexpr double kNodes[kGK] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWeightsK[kGK] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kWeightsG[kGK] = {
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082};

struct Panel {
    double lo, hi, value, error;
};

void gauss_kronrod(const std::function<double(double)>& f, double lo, double hi,
                   double& value, double& error) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum_k = 0.0, sum_g = 0.0;
    for (int i = 0; i < kGK; ++i) {
        const double fx = f(mid + half * kNodes[i]);
        if (!std::isfinite(fx))
            throw InvalidInput("integrate: integrand not finite at x = " +
                               std::to_string(mid + half * kNodes[i]));
        sum_k += kWeightsK[i] * fx;
        sum_g += kWeightsG[i] * fx;
    }
    value = sum_k * half;
    error = std::abs((sum_k - sum_g) * half);
}

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw InvalidInput("integrate: bounds must be finite with lo < hi");

    std::vector<Panel> heap;
    // Worst error first; lo breaks ties so heap order never depends on
    // insertion history.
    auto cmp = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.lo > y.lo;
    };

    Panel root{lo, hi, 0.0, 0.0};
    gauss_kronrod(f, lo, hi, root.value, root.error);
    heap.push_back(root);

    double total = root.value;
    double total_err = root.error;

    for (int split = 0; split < cfg.max_subdivisions; ++split) {
        if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)))
            return total;
        std::pop_heap(heap.begin(), heap.end(), cmp);
        Panel worst = heap.back();
        heap.pop_back();

        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left{worst.lo, mid, 0.0, 0.0};
        Panel right{mid, worst.hi, 0.0, 0.0};
        gauss_kronrod(f, left.lo, left.hi, left.value, left.error);
        gauss_kronrod(f, right.lo, right.hi, right.value, right.error);

        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;

        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    if (total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)))
        return total;
    throw NonConvergence("integrate: error estimate " + std::to_string(total_err) +
                         " above tolerance after " + std::to_string(cfg.max_subdivisions) +
                         " subdivisions on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw InvalidInput("std_normal_cdf: x must be finite");
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double log_sum_exp(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) throw InvalidInput("log_sum_exp: NaN input");
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

std::pair<double, double> stable_conditional(double log_w0, double log_w1) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    if (std::isnan(log_w0) || std::isnan(log_w1))
        throw InvalidInput("stable_conditional: NaN weight");
    if (log_w0 == neg_inf && log_w1 == neg_inf)
        throw InvalidInput("stable_conditional: both log weights are -inf");

    // The larger branch is 1/(1+e^{-d}) in [0.5,1]; its complement 1 - big
    // is exact there, so the pair sums to exactly 1.0.
    if (log_w0 >= log_w1) {
        const double big = 1.0 / (1.0 + std::exp(log_w1 - log_w0));
        return {big, 1.0 - big};
    }
    const double big = 1.0 / (1.0 + std::exp(log_w0 - log_w1));
    return {1.0 - big, big};
}

} // namespace qie
