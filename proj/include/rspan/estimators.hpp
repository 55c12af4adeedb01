#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rspan/geom.hpp"
#include "rspan/point_sample.hpp"
#include "rspan/stats.hpp"

namespace rspan {

/// Limit of t^{a/d-1} E[L^(a)] for a window of the given volume:
/// (2/kappa_d)^{a/d} Gamma(1 + a/d) vol. Exactly vol for a = 0.
double expectation_limit(double a, int d, double vol);

/// E[ell_e(0, eta + delta_0)^a] = (2/kappa_d)^{a/d} Gamma(1 + a/d).
/// Exactly 1 for a = 0.
double ell_e_moment_closed_form(double a, int d);

/// P(ell_e(0, eta + delta_0) >= u) = exp(-kappa_d u^d / 2).
double ell_e_tail(double u, int d);

/// Window-dependent tail constant: an empirical lower-bound probe for the
/// smallest volume fraction of B(x,u) cap B(0,|x|) cap W over probed (x,u).
/// Not certified; used one-sidedly in tail comparisons.
struct TailBoundParams {
    double alpha_w = 0.0;
    Window window = Window::box({-0.5}, {0.5});
};

/// Dominating curve exp(-t alpha_W kappa_d u^d) for the radial edge-length
/// tail.
double rst_tail_bound(double u, double t, const TailBoundParams& params, int d);

/// Monte Carlo volume-ratio probe over a lattice of x in W and a range of
/// radii 0 < u <= |x|: minimum observed ratio minus three binomial standard
/// errors, floored at 1e-4 and capped at 1.
TailBoundParams alpha_probe(const Window& w, int grid_points, int mc_per_cell,
                            uint64_t seed);

/// Statistics of t^{a/d-1} L^(a) across seeded replicates.
SummaryStats estimate_rst_mean(const Window& w, double t, double a, size_t replicates,
                               uint64_t seed, unsigned workers = 1);

/// SummaryStats of the raw replicate functionals with the mean entries
/// scaled by t^{a/d-1} and the variance entries by t^{2a/d-1}, so the
/// variance field estimates the limiting v_a * vol(W).
SummaryStats estimate_rst_variance(const Window& w, double t, double a, size_t replicates,
                                   uint64_t seed, unsigned workers = 1);

struct VaEstimate {
    enum class Method { BallVariance, CovarianceIntegral };
    Method method = Method::BallVariance;
    double a = 0.0;
    int d = 0;
    double value = 0.0;
    double std_error = 0.0;
    double radius = 0.0; // ball radius, or truncation radius for the integral
    double margin = 0.0; // dilation margin used
    // Shape factor of the truncation-error curve for the integral route,
    // exp(-kappa_d R^d / 2^{d+1}) kappa_d R^d; the missing constant factor is
    // problem-dependent. Zero for the ball route.
    double tail_curve_bound = 0.0;
    size_t replicates = 0;
    size_t z_samples = 0;
    bool ci_excludes_zero(double sigmas = 3.0) const {
        return value - sigmas * std_error > 0.0;
    }
};

/// v_a from the ball route: empirical variance of the directed functional
/// over B(0,r), divided by kappa_d r^d. Unit intensity, default dilation
/// margin.
VaEstimate estimate_va_ball(double r, double a, int d, const Direction& e,
                            size_t replicates, uint64_t seed, unsigned workers = 1);

/// v_a from the covariance-integral route: Monte Carlo over z uniform in
/// B(0, r_trunc) (volume-weighted) of
///   E[ell_e(0,.)^a ell_e(z,.)^a] - E[ell_e(0,.)^a]^2
/// with both points inserted into one unit-intensity sample, plus the
/// closed-form second term E[ell_e(0,.)^{2a}]. Exactly 1 for a = 0.
VaEstimate estimate_va_integral(double r_trunc, double a, int d, const Direction& e,
                                size_t z_samples, size_t replicates, uint64_t seed,
                                unsigned workers = 1);

/// Both sides of the k = 1 Mecke identity: lhs replicates of sum_x l(x)^a,
/// rhs replicates of t vol(W) l(X, eta + delta_X)^a with X uniform in W and
/// eta independent. The two means estimate the same quantity at every t.
struct MeckePair {
    double a = 0.0, t = 0.0;
    SummaryStats lhs, rhs;
    double combined_gap_sigmas() const;
};
MeckePair mecke_check(const Window& w, double t, double a, size_t replicates,
                      uint64_t seed, unsigned workers = 1);

/// Empirical fifth moments of the scaled first/second difference operators
/// across a t scan; the underlying bound asserts no growth in t.
struct DiffMomentReport {
    double a = 0.0;
    std::vector<double> t_scan;
    std::vector<std::vector<double>> z_probes;
    std::vector<std::array<std::vector<double>, 2>> pair_probes;
    // moments[t_index][probe_index]
    std::vector<std::vector<double>> first_moment5;
    std::vector<std::vector<double>> second_moment5;
    /// max over probes of m(t_{k+1}) <= factor * m(t_k) along the scan.
    bool growth_bounded(double factor) const;
};
DiffMomentReport diff_moment_check(const Window& w, std::vector<double> t_scan, double a,
                                   std::vector<std::vector<double>> z_probes,
                                   std::vector<std::array<std::vector<double>, 2>> pair_probes,
                                   size_t replicates, uint64_t seed, unsigned workers = 1);

/// Frequency of a non-zero second difference against separation, compared
/// one-sidedly to the dominating curve
/// (2 + 2/alpha_W) exp(-t alpha_W kappa_d sep^d / 2^d).
struct Diff2DecayRow {
    double separation = 0.0;
    double freq = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
};
struct Diff2DecayReport {
    double t = 0.0, a = 0.0, alpha_w = 0.0;
    int d = 0;
    std::vector<Diff2DecayRow> rows;
    bool below_bound(double sigmas = 3.0) const;
    /// Slope of log freq on separation^d over rows with freq > 0.
    double log_freq_slope() const;
};
Diff2DecayReport diff2_decay_check(const Window& w, double t, double a,
                                   std::span<const double> separations, size_t replicates,
                                   uint64_t seed, const TailBoundParams& params,
                                   unsigned workers = 1);

/// Empirical P(l(x, eta_t + delta_x) >= u) at probe points against the
/// rst_tail_bound curve.
struct RstTailRow {
    std::vector<double> x;
    double u = 0.0;
    double freq = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
};
std::vector<RstTailRow> rst_tail_check(const Window& w, double t,
                                       std::span<const std::vector<double>> xs,
                                       std::span<const double> us, size_t replicates,
                                       uint64_t seed, const TailBoundParams& params,
                                       unsigned workers = 1);

/// Supremum gap between the empirical law of ell_e(0, eta + delta_0) in a
/// margin-sized box around the origin and the closed-form distribution.
struct EllELawResult {
    double ks = 0.0;
    size_t replicates = 0;
    int d = 0;
    double margin = 0.0;
};
EllELawResult ell_e_law_check(int d, const Direction& e, size_t replicates, uint64_t seed,
                              unsigned workers = 1);

/// Kolmogorov distances of the standardized functional along a t scan plus
/// the log-log regression slope. Standardization uses the empirical
/// mean/standard deviation of the replicate set; the KS standard error is a
/// delete-one-batch jackknife with restandardization.
struct CltRow {
    double t = 0.0;
    double ks = 0.0;
    double ks_std_error = 0.0;
};
struct CltResult {
    double a = 0.0;
    std::vector<CltRow> rows;
    double loglog_slope = 0.0;
};
CltResult clt_experiment(const Window& w, double a, std::vector<double> t_list,
                         size_t replicates, uint64_t seed, unsigned workers = 1);

} // namespace rspan
