#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rspan {

/// Error function and complement, evaluated through the regularized
/// incomplete gamma function P(1/2, x^2) (series for small arguments,
/// continued fraction otherwise). Accurate to ~1e-15 relative; shipped so
/// results do not depend on the platform's libm erf.
double erf_own(double x);
double erfc_own(double x);

/// Standard normal CDF, Phi(x) = erfc(-x / sqrt(2)) / 2.
double normal_cdf(double x);

struct SummaryStats {
    size_t n = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double std_error_mean = 0.0;
    double std_error_variance = 0.0; // delete-one-batch jackknife
};

/// Mean/variance with standard errors. The variance standard error uses a
/// delete-one-batch jackknife over `batches` contiguous blocks (requires
/// n >= 2 * batches to be meaningful; falls back to fewer batches on tiny
/// inputs). Reduction is sequential in index order, so the result is
/// independent of how the values were produced.
SummaryStats summarize(std::span<const double> values, int batches = 10);

/// Unbiased sample variance in index order.
double sample_variance(std::span<const double> values);

/// Supremum distance between the empirical CDF of `samples` and `cdf`,
/// evaluating both one-sided step limits at every sample point.
double ks_distance(std::span<const double> samples,
                   const std::function<double(double)>& cdf);

/// ks_distance against the standard normal CDF. Throws on empty input.
double kolmogorov_distance(std::span<const double> samples);

/// Least-squares slope of y on x.
double regression_slope(std::span<const double> x, std::span<const double> y);

} // namespace rspan
