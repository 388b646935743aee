#pragma once

#include <functional>
#include <utility>

#include "qie/errors.hpp"

namespace qie {

/// Truncation and tolerance policy for all one-dimensional integrals.
/// Infinite integrals are truncated window_sigmas standard deviations
/// beyond the outermost Gaussian mean; the tail left out is below abs_tol
/// for window_sigmas >= 10.
struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 200;
    double window_sigmas = 10.0;

    void validate() const;
};

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [lo, hi].
///
/// Returns an estimate I with estimated error <= max(abs_tol, rel_tol*|I|).
/// Deterministic for identical inputs. Throws NonConvergence if the error
/// estimate is still above tolerance after cfg.max_subdivisions interval
/// splits, and InvalidInput on bad bounds or a non-finite integrand value.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureConfig& cfg = {});

/// Standard normal CDF, accurate into the far tails (~1e-300).
double std_normal_cdf(double x);

/// Normalized pair (e^{log_w0}, e^{log_w1}) / (e^{log_w0} + e^{log_w1}).
///
/// Safe for |log_wi| up to ~1e4; the outputs sum to exactly 1.0 and each
/// lies in [0, 1]. One argument may be -inf; both -inf is InvalidInput.
std::pair<double, double> stable_conditional(double log_w0, double log_w1);

/// log(e^a + e^b) without overflow; either argument may be -inf.
double log_sum_exp(double a, double b);

} // namespace qie
