#include "rspan/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rspan/functionals.hpp"
#include "rspan/parallel.hpp"
#include "rspan/rng.hpp"
#include "rspan/spanning.hpp"

namespace rspan {

namespace {

void require(bool ok, const char* msg) {
    if (!ok)
        throw std::invalid_argument(msg);
}

std::vector<double> window_center(const Window& w) {
    std::vector<double> c(static_cast<size_t>(w.dim()), 0.0);
    if (w.kind() == WindowKind::Box)
        for (int i = 0; i < w.dim(); ++i)
            c[static_cast<size_t>(i)] =
                0.5 * (w.lower()[static_cast<size_t>(i)] + w.upper()[static_cast<size_t>(i)]);
    return c;
}

// Uniform point of B(center, u) by rejection from the bounding cube.
void uniform_in_ball(Rng& rng, std::span<const double> center, double u, double* out) {
    const int d = static_cast<int>(center.size());
    for (;;) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double v = rng.uniform(-u, u);
            out[i] = v;
            s += v * v;
        }
        if (s <= u * u) {
            for (int i = 0; i < d; ++i)
                out[i] += center[i];
            return;
        }
    }
}

} // namespace

double expectation_limit(double a, int d, double vol) {
    require(a >= 0.0, "expectation_limit: a must be >= 0");
    require(d >= 1, "expectation_limit: d must be >= 1");
    require(vol > 0.0, "expectation_limit: volume must be positive");
    if (a == 0.0)
        return vol;
    return ell_e_moment_closed_form(a, d) * vol;
}

double ell_e_moment_closed_form(double a, int d) {
    require(a >= 0.0, "ell_e_moment_closed_form: a must be >= 0");
    require(d >= 1, "ell_e_moment_closed_form: d must be >= 1");
    if (a == 0.0)
        return 1.0;
    const double kd = unit_ball_volume(d);
    return std::pow(2.0 / kd, a / d) * gamma_function(1.0 + a / d);
}

double ell_e_tail(double u, int d) {
    require(u >= 0.0, "ell_e_tail: u must be >= 0");
    return std::exp(-0.5 * unit_ball_volume(d) * std::pow(u, d));
}

double rst_tail_bound(double u, double t, const TailBoundParams& params, int d) {
    require(u >= 0.0, "rst_tail_bound: u must be >= 0");
    require(t >= 1.0, "rst_tail_bound: t must be >= 1");
    require(params.alpha_w > 0.0 && params.alpha_w <= 1.0,
            "rst_tail_bound: alpha_w must lie in (0, 1]");
    return std::exp(-t * params.alpha_w * unit_ball_volume(d) * std::pow(u, d));
}

TailBoundParams alpha_probe(const Window& w, int grid_points, int mc_per_cell,
                            uint64_t seed) {
    require(grid_points >= 1, "alpha_probe: grid_points must be >= 1");
    require(mc_per_cell >= 1, "alpha_probe: mc_per_cell must be >= 1");
    const int d = w.dim();
    const int per_axis =
        std::max(1, static_cast<int>(std::ceil(std::pow(grid_points, 1.0 / d))));

    std::vector<double> lo, hi;
    w.bounding_box(lo, hi);

    std::vector<std::vector<double>> xs;
    std::vector<int> idx(static_cast<size_t>(d), 0);
    for (;;) {
        std::vector<double> x(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i)
            x[static_cast<size_t>(i)] =
                lo[static_cast<size_t>(i)] +
                (idx[static_cast<size_t>(i)] + 0.5) / per_axis *
                    (hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]);
        if (w.contains(x) && norm2(x) > 0.0)
            xs.push_back(std::move(x));
        int axis = 0;
        while (axis < d && ++idx[static_cast<size_t>(axis)] == per_axis) {
            idx[static_cast<size_t>(axis)] = 0;
            ++axis;
        }
        if (axis == d)
            break;
    }
    require(!xs.empty(), "alpha_probe: window produced no probe points");

    static constexpr double kFractions[] = {0.1, 0.25, 0.5, 0.75, 1.0};
    double alpha = 1.0;
    uint64_t cell_index = 0;
    std::vector<double> y(static_cast<size_t>(d));
    for (const auto& x : xs) {
        const double nx = std::sqrt(norm2(x));
        const double n2x = norm2(x);
        for (double f : kFractions) {
            const double u = f * nx;
            Rng rng(derive_replicate_seed(seed, cell_index++));
            int hits = 0;
            for (int m = 0; m < mc_per_cell; ++m) {
                uniform_in_ball(rng, x, u, y.data());
                if (norm2(y) <= n2x && w.contains(y))
                    ++hits;
            }
            const double p = static_cast<double>(hits) / mc_per_cell;
            const double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / mc_per_cell) /
                                        mc_per_cell);
            alpha = std::min(alpha, p - 3.0 * se);
        }
    }
    TailBoundParams params;
    params.alpha_w = std::clamp(alpha, 1e-4, 1.0);
    params.window = w;
    return params;
}

namespace {

// Per-replicate values of the RST functional, computed in parallel into
// index-keyed slots.
std::vector<double> rst_functional_replicates(const Window& w, double t, double a,
                                              size_t replicates, uint64_t seed,
                                              unsigned workers) {
    std::vector<double> values(replicates);
    parallel_for(replicates, workers, [&](size_t i) {
        const PointSample s = sample_poisson(w, t, derive_replicate_seed(seed, i));
        values[i] = eval_rst_functional(build_rst(s), a).value;
    });
    return values;
}

} // namespace

SummaryStats estimate_rst_mean(const Window& w, double t, double a, size_t replicates,
                               uint64_t seed, unsigned workers) {
    require(replicates >= 2, "estimate_rst_mean: need at least 2 replicates");
    require(t >= 1.0, "estimate_rst_mean: t must be >= 1");
    require(a >= 0.0, "estimate_rst_mean: a must be >= 0");
    const double scale = std::pow(t, a / w.dim() - 1.0);
    std::vector<double> values = rst_functional_replicates(w, t, a, replicates, seed, workers);
    for (double& v : values)
        v *= scale;
    return summarize(values);
}

SummaryStats estimate_rst_variance(const Window& w, double t, double a, size_t replicates,
                                   uint64_t seed, unsigned workers) {
    require(replicates >= 30, "estimate_rst_variance: need at least 30 replicates");
    require(t >= 1.0, "estimate_rst_variance: t must be >= 1");
    require(a >= 0.0, "estimate_rst_variance: a must be >= 0");
    const std::vector<double> values =
        rst_functional_replicates(w, t, a, replicates, seed, workers);
    SummaryStats raw = summarize(values);
    const double sm = std::pow(t, a / w.dim() - 1.0);
    const double sv = std::pow(t, 2.0 * a / w.dim() - 1.0);
    SummaryStats st;
    st.n = raw.n;
    st.mean = sm * raw.mean;
    st.std_error_mean = sm * raw.std_error_mean;
    st.variance = sv * raw.variance;
    st.std_error_variance = sv * raw.std_error_variance;
    return st;
}

VaEstimate estimate_va_ball(double r, double a, int d, const Direction& e,
                            size_t replicates, uint64_t seed, unsigned workers) {
    require(r > 0.0, "estimate_va_ball: radius must be positive");
    require(a >= 0.0, "estimate_va_ball: a must be >= 0");
    require(replicates >= 4, "estimate_va_ball: need at least 4 replicates");
    const Window core = Window::ball(d, r);
    const double margin = default_dilation_margin(d);
    std::vector<double> values(replicates);
    parallel_for(replicates, workers, [&](size_t i) {
        const PointSample s =
            sample_poisson_dilated(core, 1.0, margin, derive_replicate_seed(seed, i));
        values[i] = eval_dsf_functional(s, build_dsf(s, e), core, a).value;
    });
    const SummaryStats st = summarize(values);
    const double denom = unit_ball_volume(d) * std::pow(r, d);
    VaEstimate out;
    out.method = VaEstimate::Method::BallVariance;
    out.a = a;
    out.d = d;
    out.value = st.variance / denom;
    out.std_error = st.std_error_variance / denom;
    out.radius = r;
    out.margin = margin;
    out.replicates = replicates;
    return out;
}

VaEstimate estimate_va_integral(double r_trunc, double a, int d, const Direction& e,
                                size_t z_samples, size_t replicates, uint64_t seed,
                                unsigned workers) {
    require(r_trunc > 0.0, "estimate_va_integral: truncation radius must be positive");
    require(a >= 0.0, "estimate_va_integral: a must be >= 0");
    require(z_samples >= 2, "estimate_va_integral: need at least 2 z samples");
    require(replicates >= 1, "estimate_va_integral: need at least 1 replicate");

    const double margin = default_dilation_margin(d);
    const double m1 = ell_e_moment_closed_form(a, d);
    const double term2 = ell_e_moment_closed_form(2.0 * a, d);
    const double vol = unit_ball_volume(d) * std::pow(r_trunc, d);

    // All z draws come from one sequential stream so the worker count cannot
    // change them.
    std::vector<double> zs(z_samples * static_cast<size_t>(d));
    {
        Rng zrng(derive_stream_seed(seed, 0));
        const std::vector<double> origin(static_cast<size_t>(d), 0.0);
        for (size_t zi = 0; zi < z_samples; ++zi)
            uniform_in_ball(zrng, origin, r_trunc, zs.data() + zi * static_cast<size_t>(d));
    }
    const uint64_t inner_master = derive_stream_seed(seed, 1);

    std::vector<double> g(z_samples);
    parallel_for(z_samples, workers, [&](size_t zi) {
        const double* z = zs.data() + zi * static_cast<size_t>(d);
        std::vector<double> lo(static_cast<size_t>(d)), hi(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) {
            lo[static_cast<size_t>(i)] = std::min(0.0, z[i]) - margin;
            hi[static_cast<size_t>(i)] = std::max(0.0, z[i]) + margin;
        }
        const Window box = Window::box(lo, hi);
        const std::vector<double> origin(static_cast<size_t>(d), 0.0);
        double prod_sum = 0.0;
        for (size_t ri = 0; ri < replicates; ++ri) {
            const uint64_t s_i =
                derive_replicate_seed(inner_master, zi * replicates + ri);
            PointSample s = sample_poisson(box, 1.0, s_i);
            s = append_point(s, origin);
            s = append_point(s, {z, static_cast<size_t>(d)});
            const size_t n = s.size();
            const double l0 = directed_parent(n - 2, s, e).length;
            const double lz = directed_parent(n - 1, s, e).length;
            prod_sum += pow_edge(l0, a) * pow_edge(lz, a);
        }
        g[zi] = prod_sum / static_cast<double>(replicates) - m1 * m1;
    });

    double gm = 0.0;
    for (double v : g)
        gm += v;
    gm /= static_cast<double>(z_samples);

    VaEstimate out;
    out.method = VaEstimate::Method::CovarianceIntegral;
    out.a = a;
    out.d = d;
    out.value = vol * gm + term2;
    out.std_error = vol * std::sqrt(sample_variance(g) / static_cast<double>(z_samples));
    out.radius = r_trunc;
    out.margin = margin;
    out.tail_curve_bound =
        std::exp(-unit_ball_volume(d) * std::pow(r_trunc, d) / std::pow(2.0, d + 1)) * vol;
    out.replicates = replicates;
    out.z_samples = z_samples;
    return out;
}

double MeckePair::combined_gap_sigmas() const {
    const double se = std::sqrt(lhs.std_error_mean * lhs.std_error_mean +
                                rhs.std_error_mean * rhs.std_error_mean);
    return std::abs(lhs.mean - rhs.mean) / se;
}

MeckePair mecke_check(const Window& w, double t, double a, size_t replicates,
                      uint64_t seed, unsigned workers) {
    require(replicates >= 30, "mecke_check: need at least 30 replicates");
    require(t >= 1.0, "mecke_check: t must be >= 1");
    require(a >= 0.0, "mecke_check: a must be >= 0");
    const uint64_t s_lhs = derive_stream_seed(seed, 0);
    const uint64_t s_rhs = derive_stream_seed(seed, 1);
    const uint64_t s_x = derive_stream_seed(seed, 2);
    const double tvol = t * w.volume();

    std::vector<double> lhs(replicates), rhs(replicates);
    parallel_for(replicates, workers, [&](size_t i) {
        {
            const PointSample s = sample_poisson(w, t, derive_replicate_seed(s_lhs, i));
            lhs[i] = eval_rst_functional(build_rst(s), a).value;
        }
        {
            const PointSample s = sample_poisson(w, t, derive_replicate_seed(s_rhs, i));
            Rng xr(derive_replicate_seed(s_x, i));
            std::vector<double> x(static_cast<size_t>(w.dim()));
            uniform_point(xr, w, x.data());
            const PointSample appended = append_point(s, x);
            const double l = radial_parent(appended.size() - 1, appended).length;
            rhs[i] = tvol * pow_edge(l, a);
        }
    });

    MeckePair out;
    out.a = a;
    out.t = t;
    out.lhs = summarize(lhs);
    out.rhs = summarize(rhs);
    return out;
}

bool DiffMomentReport::growth_bounded(double factor) const {
    for (size_t ti = 0; ti + 1 < t_scan.size(); ++ti) {
        for (size_t p = 0; p < first_moment5[ti].size(); ++p)
            if (first_moment5[ti + 1][p] > factor * first_moment5[ti][p])
                return false;
        for (size_t p = 0; p < second_moment5[ti].size(); ++p)
            if (second_moment5[ti + 1][p] > factor * second_moment5[ti][p])
                return false;
    }
    return true;
}

DiffMomentReport diff_moment_check(const Window& w, std::vector<double> t_scan, double a,
                                   std::vector<std::vector<double>> z_probes,
                                   std::vector<std::array<std::vector<double>, 2>> pair_probes,
                                   size_t replicates, uint64_t seed, unsigned workers) {
    require(!t_scan.empty(), "diff_moment_check: empty t scan");
    require(replicates >= 2, "diff_moment_check: need at least 2 replicates");
    for (const auto& z : z_probes)
        require(w.contains(z), "diff_moment_check: probe outside window");
    for (const auto& p : pair_probes) {
        require(w.contains(p[0]) && w.contains(p[1]),
                "diff_moment_check: probe pair outside window");
    }
    const int d = w.dim();
    const FunctionalSpec spec = FunctionalSpec::rst(a);

    DiffMomentReport report;
    report.a = a;
    report.t_scan = t_scan;
    report.z_probes = z_probes;
    report.pair_probes = pair_probes;
    report.first_moment5.assign(t_scan.size(), std::vector<double>(z_probes.size(), 0.0));
    report.second_moment5.assign(t_scan.size(), std::vector<double>(pair_probes.size(), 0.0));

    for (size_t ti = 0; ti < t_scan.size(); ++ti) {
        const double t = t_scan[ti];
        require(t >= 1.0, "diff_moment_check: t must be >= 1");
        const double scale = std::pow(t, a / d);
        const uint64_t stream = derive_stream_seed(seed, ti);
        std::vector<std::vector<double>> first(z_probes.size(),
                                               std::vector<double>(replicates, 0.0));
        std::vector<std::vector<double>> second(pair_probes.size(),
                                                std::vector<double>(replicates, 0.0));
        parallel_for(replicates, workers, [&](size_t i) {
            const PointSample s = sample_poisson(w, t, derive_replicate_seed(stream, i));
            const RadialTree base = build_rst(s);
            for (size_t p = 0; p < z_probes.size(); ++p) {
                const double dv = diff_first_with_base(spec, s, base.parent,
                                                       base.edge_length, z_probes[p]);
                first[p][i] = std::pow(std::abs(scale * dv), 5.0);
            }
            for (size_t p = 0; p < pair_probes.size(); ++p) {
                const double dv =
                    diff_second_with_base(spec, s, base.parent, base.edge_length,
                                          pair_probes[p][0], pair_probes[p][1]);
                second[p][i] = std::pow(std::abs(scale * dv), 5.0);
            }
        });
        for (size_t p = 0; p < z_probes.size(); ++p)
            report.first_moment5[ti][p] = summarize(first[p]).mean;
        for (size_t p = 0; p < pair_probes.size(); ++p)
            report.second_moment5[ti][p] = summarize(second[p]).mean;
    }
    return report;
}

bool Diff2DecayReport::below_bound(double sigmas) const {
    for (const auto& row : rows)
        if (row.freq > row.bound + sigmas * row.std_error)
            return false;
    return true;
}

double Diff2DecayReport::log_freq_slope() const {
    std::vector<double> xs, ys;
    for (const auto& row : rows) {
        if (row.freq > 0.0) {
            xs.push_back(std::pow(row.separation, d));
            ys.push_back(std::log(row.freq));
        }
    }
    if (xs.size() < 2)
        return 0.0;
    return regression_slope(xs, ys);
}

Diff2DecayReport diff2_decay_check(const Window& w, double t, double a,
                                   std::span<const double> separations, size_t replicates,
                                   uint64_t seed, const TailBoundParams& params,
                                   unsigned workers) {
    require(!separations.empty(), "diff2_decay_check: empty separation grid");
    require(replicates >= 2, "diff2_decay_check: need at least 2 replicates");
    require(t >= 1.0, "diff2_decay_check: t must be >= 1");
    const int d = w.dim();
    const double kd = unit_ball_volume(d);
    const FunctionalSpec spec = FunctionalSpec::rst(a);

    // Probe pairs sit on the first axis around an off-centre anchor.
    std::vector<double> anchor = window_center(w);
    std::vector<double> lo, hi;
    w.bounding_box(lo, hi);
    for (int i = 0; i < d; ++i)
        anchor[static_cast<size_t>(i)] +=
            0.2 * (hi[static_cast<size_t>(i)] - anchor[static_cast<size_t>(i)]);

    std::vector<std::array<std::vector<double>, 2>> pairs;
    for (double sep : separations) {
        std::vector<double> z1 = anchor, z2 = anchor;
        z1[0] -= 0.5 * sep;
        z2[0] += 0.5 * sep;
        require(w.contains(z1) && w.contains(z2),
                "diff2_decay_check: separation exceeds window");
        pairs.push_back({std::move(z1), std::move(z2)});
    }

    const uint64_t stream = derive_stream_seed(seed, 0);
    std::vector<std::vector<uint8_t>> nonzero(separations.size(),
                                              std::vector<uint8_t>(replicates, 0));
    parallel_for(replicates, workers, [&](size_t i) {
        const PointSample s = sample_poisson(w, t, derive_replicate_seed(stream, i));
        const RadialTree base = build_rst(s);
        for (size_t k = 0; k < pairs.size(); ++k) {
            const double dv = diff_second_with_base(spec, s, base.parent, base.edge_length,
                                                    pairs[k][0], pairs[k][1]);
            nonzero[k][i] = dv != 0.0 ? 1 : 0;
        }
    });

    Diff2DecayReport report;
    report.t = t;
    report.a = a;
    report.alpha_w = params.alpha_w;
    report.d = d;
    for (size_t k = 0; k < separations.size(); ++k) {
        size_t count = 0;
        for (uint8_t v : nonzero[k])
            count += v;
        Diff2DecayRow row;
        row.separation = separations[k];
        row.freq = static_cast<double>(count) / static_cast<double>(replicates);
        row.std_error = std::sqrt(row.freq * (1.0 - row.freq) / static_cast<double>(replicates));
        row.bound = (2.0 + 2.0 / params.alpha_w) *
                    std::exp(-t * params.alpha_w * kd * std::pow(separations[k], d) /
                             std::pow(2.0, d));
        report.rows.push_back(row);
    }
    return report;
}

std::vector<RstTailRow> rst_tail_check(const Window& w, double t,
                                       std::span<const std::vector<double>> xs,
                                       std::span<const double> us, size_t replicates,
                                       uint64_t seed, const TailBoundParams& params,
                                       unsigned workers) {
    require(!xs.empty() && !us.empty(), "rst_tail_check: empty probe set");
    require(replicates >= 2, "rst_tail_check: need at least 2 replicates");
    const int d = w.dim();
    std::vector<RstTailRow> rows;
    uint64_t probe_index = 0;
    for (const auto& x : xs) {
        require(w.contains(x), "rst_tail_check: probe outside window");
        for (double u : us) {
            const uint64_t stream = derive_stream_seed(seed, probe_index++);
            std::vector<uint8_t> hits(replicates, 0);
            parallel_for(replicates, workers, [&](size_t i) {
                const PointSample s =
                    sample_poisson(w, t, derive_replicate_seed(stream, i));
                const PointSample appended = append_point(s, x);
                hits[i] = radial_parent(appended.size() - 1, appended).length >= u ? 1 : 0;
            });
            size_t count = 0;
            for (uint8_t v : hits)
                count += v;
            RstTailRow row;
            row.x = x;
            row.u = u;
            row.freq = static_cast<double>(count) / static_cast<double>(replicates);
            row.std_error =
                std::sqrt(row.freq * (1.0 - row.freq) / static_cast<double>(replicates));
            row.bound = rst_tail_bound(u, t, params, d);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

EllELawResult ell_e_law_check(int d, const Direction& e, size_t replicates, uint64_t seed,
                              unsigned workers) {
    require(d >= 1, "ell_e_law_check: d must be >= 1");
    require(replicates >= 10, "ell_e_law_check: need at least 10 replicates");
    const double margin = default_dilation_margin(d);
    const Window box = Window::box(std::vector<double>(static_cast<size_t>(d), -margin),
                                   std::vector<double>(static_cast<size_t>(d), margin));
    const std::vector<double> origin(static_cast<size_t>(d), 0.0);
    std::vector<double> lengths(replicates);
    parallel_for(replicates, workers, [&](size_t i) {
        const PointSample s = sample_poisson(box, 1.0, derive_replicate_seed(seed, i));
        const PointSample appended = append_point(s, origin);
        lengths[i] = directed_parent(appended.size() - 1, appended, e).length;
    });
    EllELawResult out;
    out.replicates = replicates;
    out.d = d;
    out.margin = margin;
    out.ks = ks_distance(lengths, [d](double u) {
        return u <= 0.0 ? 0.0 : 1.0 - ell_e_tail(u, d);
    });
    return out;
}

CltResult clt_experiment(const Window& w, double a, std::vector<double> t_list,
                         size_t replicates, uint64_t seed, unsigned workers) {
    require(replicates >= 1000, "clt_experiment: need at least 1000 replicates per t");
    require(!t_list.empty(), "clt_experiment: empty t list");
    for (size_t i = 0; i + 1 < t_list.size(); ++i)
        require(t_list[i] < t_list[i + 1], "clt_experiment: t list must be increasing");
    require(a >= 0.0, "clt_experiment: a must be >= 0");

    auto standardized_ks = [](std::span<const double> values) {
        const SummaryStats st = summarize(values);
        std::vector<double> z(values.size());
        const double sd = std::sqrt(st.variance);
        for (size_t i = 0; i < values.size(); ++i)
            z[i] = (values[i] - st.mean) / sd;
        return kolmogorov_distance(z);
    };

    CltResult out;
    out.a = a;
    std::vector<double> log_t, log_ks;
    for (size_t ti = 0; ti < t_list.size(); ++ti) {
        const double t = t_list[ti];
        require(t >= 1.0, "clt_experiment: t must be >= 1");
        const uint64_t stream = derive_stream_seed(seed, ti);
        const std::vector<double> values =
            rst_functional_replicates(w, t, a, replicates, stream, workers);

        CltRow row;
        row.t = t;
        row.ks = standardized_ks(values);

        // Delete-one-batch jackknife with restandardization.
        const int b = 10;
        std::vector<double> ks_b;
        std::vector<double> buf;
        buf.reserve(values.size());
        for (int k = 0; k < b; ++k) {
            const size_t lo = values.size() * static_cast<size_t>(k) / b;
            const size_t hi = values.size() * static_cast<size_t>(k + 1) / b;
            buf.clear();
            for (size_t i = 0; i < values.size(); ++i)
                if (i < lo || i >= hi)
                    buf.push_back(values[i]);
            ks_b.push_back(standardized_ks(buf));
        }
        double m = 0.0;
        for (double v : ks_b)
            m += v;
        m /= b;
        double ss = 0.0;
        for (double v : ks_b)
            ss += (v - m) * (v - m);
        row.ks_std_error = std::sqrt(ss * (b - 1.0) / b);

        out.rows.push_back(row);
        log_t.push_back(std::log(t));
        log_ks.push_back(std::log(row.ks));
    }
    out.loglog_slope = t_list.size() >= 2 ? regression_slope(log_t, log_ks) : 0.0;
    return out;
}

} // namespace rspan
