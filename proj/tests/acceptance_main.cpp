// Acceptance suite: one pass/fail line per criterion, exit code equal to the
// number of failures. Every tolerance is fixed here in code.
//
//   ./acceptance            runs all criteria
//   ./acceptance --only N   runs a single criterion (repeatable)

#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rspan/estimators.hpp"
#include "rspan/functionals.hpp"
#include "rspan/parallel.hpp"
#include "rspan/point_sample.hpp"
#include "rspan/rng.hpp"
#include "rspan/spanning.hpp"
#include "rspan/stats.hpp"
#include "support/oracle.hpp"

using namespace rspan;

namespace {

const Window kUnitSquare = Window::box({-0.5, -0.5}, {0.5, 0.5});
const Window kUnitCube = Window::box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});

struct CheckList {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "  FAILED: " << what << "\n";
        }
    }
    void note(const std::string& line) { detail << "  " << line << "\n"; }
};

double combined_se(double a, double b) { return std::sqrt(a * a + b * b); }

// ---------------------------------------------------------------- criterion 1

bool criterion_closed_forms(CheckList& c) {
    const double expect_sqrt2_over_2 = 0.70710678118654752440;
    const double got = expectation_limit(1.0, 2, 1.0);
    c.expect(std::abs(got - expect_sqrt2_over_2) <= 1e-12 * expect_sqrt2_over_2,
             "expectation_limit(1,2,1) == sqrt(2)/2");
    c.note("expectation_limit(1,2,1) = " + std::to_string(got));

    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        for (int d : {2, 3}) {
            const double closed = ell_e_moment_closed_form(a, d);
            const double quad = oracle::ell_e_moment_quadrature(a, d);
            const double rel = std::abs(closed - quad) / closed;
            c.expect(rel <= 1e-8, "quadrature cross-check a=" + std::to_string(a) +
                                      " d=" + std::to_string(d));
        }
    }
    c.note("moment quadrature cross-checks at rel 1e-8: a in {0.5,1,2,3}, d in {2,3}");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_construction(CheckList& c) {
    const uint64_t seed = 202;
    size_t compared = 0;
    for (int d : {2, 3}) {
        const Window& w = d == 2 ? kUnitSquare : kUnitCube;
        const Direction e = Direction::axis(d, 0);
        auto run_batch = [&](double t, int instances, uint64_t stream) {
            for (int inst = 0; inst < instances; ++inst) {
                const PointSample s = sample_poisson(
                    w, t, derive_replicate_seed(derive_stream_seed(seed, stream + d), inst));
                const RadialTree tree = build_rst(s, default_workers());
                c.expect(oracle::links_equal(oracle::rst(s), tree.parent, tree.edge_length),
                         "rst == oracle (d=" + std::to_string(d) +
                             ", n~" + std::to_string(static_cast<int>(t)) + ")");
                const DirectedForest forest = build_dsf(s, e, default_workers());
                c.expect(oracle::links_equal(oracle::dsf(s, e), forest.parent,
                                             forest.edge_length),
                         "dsf == oracle (d=" + std::to_string(d) +
                             ", n~" + std::to_string(static_cast<int>(t)) + ")");
                ++compared;
            }
        };
        run_batch(200.0, 100, 0);
        run_batch(5000.0, 10, 10);
    }
    c.note("exact parent equality on " + std::to_string(compared) +
           " instances (rst and dsf, d in {2,3})");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_expectation_asymptotics(CheckList& c) {
    const uint64_t seed = 303;
    const double limit = expectation_limit(1.0, 2, 1.0);
    const std::vector<double> ts{250.0, 1000.0, 2000.0};
    std::vector<double> gaps, ses;
    for (size_t i = 0; i < ts.size(); ++i) {
        const SummaryStats st = estimate_rst_mean(kUnitSquare, ts[i], 1.0, 400,
                                                  derive_stream_seed(seed, i),
                                                  default_workers());
        gaps.push_back(std::abs(st.mean - limit));
        ses.push_back(st.std_error_mean);
        std::ostringstream line;
        line << "t=" << ts[i] << ": scaled mean " << st.mean << " +- " << st.std_error_mean
             << " (gap " << gaps.back() << ")";
        c.note(line.str());
    }
    c.expect(gaps.back() <= 0.05 * limit, "gap at t=2000 within 5% of the limit");
    for (size_t i = 0; i + 1 < gaps.size(); ++i) {
        c.expect(gaps[i + 1] <= gaps[i] + 3.0 * combined_se(ses[i], ses[i + 1]),
                 "gap shrinks monotonically within std error");
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_edge_length_law(CheckList& c) {
    const EllELawResult res = ell_e_law_check(2, Direction::axis(2, 0), 10000, 404,
                                              default_workers());
    std::ostringstream line;
    line << "KS distance over 10^4 replicates: " << res.ks << " (margin " << res.margin
         << ")";
    c.note(line.str());
    c.expect(res.ks < 0.02, "KS distance of the edge-length law below 0.02");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_variance_asymptotics(CheckList& c) {
    const Direction e = Direction::axis(2, 0);

    // (i) a = 0: integral route is exact, ball route within 3 std errors of 1
    const VaEstimate vi0 = estimate_va_integral(4.0, 0.0, 2, e, 100, 50, 505,
                                                default_workers());
    c.expect(vi0.value == 1.0, "integral route equals 1 exactly at a=0");
    const VaEstimate vb0 = estimate_va_ball(8.0, 0.0, 2, e, 3000, 542, default_workers());
    c.expect(std::abs(vb0.value - 1.0) <= 3.0 * vb0.std_error,
             "ball route within 3 sigma of 1 at a=0");
    {
        std::ostringstream line;
        line << "a=0: integral " << vi0.value << ", ball " << vb0.value << " +- "
             << vb0.std_error;
        c.note(line.str());
    }

    // (ii) a = 1: the two routes agree and their CIs exclude zero
    const VaEstimate vb = estimate_va_ball(32.0, 1.0, 2, e, 2000, 507, default_workers());
    const VaEstimate vi = estimate_va_integral(5.0, 1.0, 2, e, 20000, 400, 548,
                                               default_workers());
    {
        std::ostringstream line;
        line << "a=1: ball(r=32) " << vb.value << " +- " << vb.std_error << ", integral "
             << vi.value << " +- " << vi.std_error;
        c.note(line.str());
    }
    const double gap_ii = std::abs(vb.value - vi.value);
    c.expect(gap_ii <= 3.0 * combined_se(vb.std_error, vi.std_error),
             "ball and integral routes agree within combined 3 sigma");
    c.expect(vb.ci_excludes_zero(), "ball CI excludes zero");
    c.expect(vi.ci_excludes_zero(), "integral CI excludes zero");

    // (iii) the scaled functional variance at t=2000 agrees with both routes
    const SummaryStats var = estimate_rst_variance(kUnitSquare, 2000.0, 1.0, 600, 509,
                                                   default_workers());
    {
        std::ostringstream line;
        line << "t=2000 scaled variance " << var.variance << " +- "
             << var.std_error_variance;
        c.note(line.str());
    }
    c.expect(std::abs(var.variance - vb.value * kUnitSquare.volume()) <=
                 3.0 * combined_se(var.std_error_variance, vb.std_error),
             "scaled variance agrees with the ball route within combined 3 sigma");
    c.expect(std::abs(var.variance - vi.value * kUnitSquare.volume()) <=
                 3.0 * combined_se(var.std_error_variance, vi.std_error),
             "scaled variance agrees with the integral route within combined 3 sigma");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_clt_rate(CheckList& c) {
    const CltResult res = clt_experiment(kUnitSquare, 1.0, {64.0, 256.0, 1024.0}, 2000,
                                         606, default_workers());
    for (const auto& row : res.rows) {
        std::ostringstream line;
        line << "t=" << row.t << ": KS " << row.ks << " +- " << row.ks_std_error;
        c.note(line.str());
    }
    c.note("log-log slope " + std::to_string(res.loglog_slope));

    int inversions = 0;
    for (size_t i = 0; i + 1 < res.rows.size(); ++i) {
        if (res.rows[i + 1].ks > res.rows[i].ks) {
            ++inversions;
            c.expect(res.rows[i + 1].ks <=
                         res.rows[i].ks + 3.0 * combined_se(res.rows[i].ks_std_error,
                                                            res.rows[i + 1].ks_std_error),
                     "inversion stays within subsampling error");
        }
    }
    c.expect(inversions <= 1, "at most one inversion along the t scan");
    c.expect(res.rows.back().ks < 0.05, "final KS below 0.05");
    c.expect(res.loglog_slope >= -0.85 && res.loglog_slope <= -0.15,
             "log-log slope within [-0.85, -0.15]");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_mecke(CheckList& c) {
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
        for (double t : {250.0, 1000.0}) {
            const uint64_t seed = derive_stream_seed(707, static_cast<uint64_t>(a * 10) +
                                                              static_cast<uint64_t>(t));
            const MeckePair pair = mecke_check(kUnitSquare, t, a, 400, seed,
                                               default_workers());
            const double sig = pair.combined_gap_sigmas();
            std::ostringstream line;
            line << "a=" << a << " t=" << t << ": lhs " << pair.lhs.mean << ", rhs "
                 << pair.rhs.mean << " (" << sig << " sigma)";
            c.note(line.str());
            c.expect(sig <= 3.0, line.str());
        }
    }
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_difference_operators(CheckList& c) {
    // exact zero of the second difference for the vertex count
    {
        Rng zr(808);
        bool all_zero = true;
        for (int trial = 0; trial < 200; ++trial) {
            const PointSample s =
                sample_poisson(kUnitSquare, 250.0, derive_replicate_seed(809, trial));
            const std::vector<double> z1{zr.uniform(-0.5, 0.5), zr.uniform(-0.5, 0.5)};
            const std::vector<double> z2{zr.uniform(-0.5, 0.5), zr.uniform(-0.5, 0.5)};
            all_zero =
                all_zero && diff_second(FunctionalSpec::rst(0.0), s, z1, z2) == 0.0;
        }
        c.expect(all_zero, "second difference identically zero for a=0 (200 trials)");
    }

    // moment scan: no growth beyond factor 2 across t in {250, 1000, 4000}.
    // A probe at the exact origin would be degenerate (it ties with the root
    // on every comparator key), so both probes sit away from it.
    const std::vector<std::vector<double>> probes{{0.1, 0.1}, {0.25, 0.25}};
    const std::vector<std::array<std::vector<double>, 2>> pairs{
        {std::vector<double>{0.1, 0.1}, std::vector<double>{0.12, 0.1}}};
    const DiffMomentReport rep = diff_moment_check(
        kUnitSquare, {250.0, 1000.0, 4000.0}, 1.0, probes, pairs, 1500, 810,
        default_workers());
    for (size_t ti = 0; ti < rep.t_scan.size(); ++ti) {
        std::ostringstream line;
        line << "t=" << rep.t_scan[ti] << ": first-moment5";
        for (double m : rep.first_moment5[ti])
            line << " " << m;
        line << ", second-moment5";
        for (double m : rep.second_moment5[ti])
            line << " " << m;
        c.note(line.str());
    }
    c.expect(rep.growth_bounded(2.0), "5th moments grow by at most factor 2 along the scan");

    // decay of P(D^2 != 0) under the dominating curve at the probe alpha
    const TailBoundParams params = alpha_probe(kUnitSquare, 25, 4000, 811);
    c.note("alpha probe: " + std::to_string(params.alpha_w));
    const double t = 1000.0;
    std::vector<double> seps;
    for (int k = 1; k <= 8; ++k)
        seps.push_back(0.5 * k * std::pow(t, -0.5));
    const Diff2DecayReport decay =
        diff2_decay_check(kUnitSquare, t, 1.0, seps, 400, 812, params, default_workers());
    for (const auto& row : decay.rows) {
        std::ostringstream line;
        line << "sep=" << row.separation << ": freq " << row.freq << " (bound " << row.bound
             << ")";
        c.note(line.str());
    }
    c.expect(decay.below_bound(3.0),
             "P(D^2 != 0) below the dominating curve (one-sided 3 sigma)");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_property_suites(CheckList& c) {
    const Direction e = Direction::axis(2, 0);

    // monotonicity under insertion
    {
        Rng extra(909);
        bool ok = true;
        for (int inst = 0; inst < 30 && ok; ++inst) {
            const PointSample s =
                sample_poisson(kUnitSquare, 120.0, derive_replicate_seed(910, inst));
            const RadialTree bt = build_rst(s);
            const DirectedForest bf = build_dsf(s, e);
            PointSample grown = s;
            for (int k = 0; k < 5; ++k)
                grown = append_point(grown, std::vector<double>{extra.uniform(-0.5, 0.5),
                                                                extra.uniform(-0.5, 0.5)});
            const RadialTree gt = build_rst(grown);
            const DirectedForest gf = build_dsf(grown, e);
            for (size_t i = 0; i < s.size(); ++i) {
                ok = ok && gt.edge_length[i] <= bt.edge_length[i];
                if (bf.parent[i] != kParentNone)
                    ok = ok && gf.edge_length[i] <= bf.edge_length[i];
            }
        }
        c.expect(ok, "edge lengths never grow under insertion (rst and dsf)");
    }

    // homogeneity: parent invariance plus length scaling
    {
        bool ok = true;
        for (int inst = 0; inst < 30 && ok; ++inst) {
            PointSample s =
                sample_poisson(kUnitSquare, 120.0, derive_replicate_seed(911, inst));
            s.core = Window::box({-20, -20}, {20, 20});
            const RadialTree base = build_rst(s);
            for (double scale : {0.5, 2.0, 10.0}) {
                PointSample scaled = s;
                for (double& v : scaled.coords)
                    v *= scale;
                const RadialTree tree = build_rst(scaled);
                ok = ok && tree.parent == base.parent;
                for (size_t i = 0; i < s.size() && ok; ++i) {
                    const double expect = scale * base.edge_length[i];
                    ok = ok && std::abs(tree.edge_length[i] - expect) <= 1e-12 * expect;
                }
            }
        }
        c.expect(ok, "scaling preserves parents and scales lengths");
    }

    // acyclicity and radial monotonicity
    {
        bool ok = true;
        for (int inst = 0; inst < 20 && ok; ++inst) {
            const PointSample s =
                sample_poisson(kUnitSquare, 250.0, derive_replicate_seed(912, inst));
            const RadialTree tree = build_rst(s);
            for (size_t i = 0; i < s.size() && ok; ++i) {
                size_t steps = 0;
                uint32_t cur = static_cast<uint32_t>(i);
                while (cur != kParentRoot && steps <= s.size()) {
                    cur = tree.parent[cur];
                    ++steps;
                }
                ok = ok && cur == kParentRoot;
                if (tree.parent[i] != kParentRoot)
                    ok = ok && norm2(s.point(tree.parent[i])) <= norm2(s.point(i));
            }
        }
        c.expect(ok, "parent chains reach ROOT and norms never increase");
    }

    // second-difference symmetry, bit for bit
    {
        Rng zr(913);
        bool ok = true;
        for (int trial = 0; trial < 200 && ok; ++trial) {
            const PointSample s =
                sample_poisson(kUnitSquare, 80.0, derive_replicate_seed(914, trial));
            const std::vector<double> z1{zr.uniform(-0.5, 0.5), zr.uniform(-0.5, 0.5)};
            const std::vector<double> z2{zr.uniform(-0.5, 0.5), zr.uniform(-0.5, 0.5)};
            const FunctionalSpec spec = FunctionalSpec::rst(1.0);
            ok = ok && diff_second(spec, s, z1, z2) == diff_second(spec, s, z2, z1);
        }
        c.expect(ok, "diff_second(z1,z2) == diff_second(z2,z1) exactly");
    }

    // bit-reproducibility across worker counts
    {
        const SummaryStats w1 = estimate_rst_mean(kUnitSquare, 200.0, 1.0, 100, 915, 1);
        const SummaryStats w4 = estimate_rst_mean(kUnitSquare, 200.0, 1.0, 100, 915, 4);
        c.expect(w1.mean == w4.mean && w1.variance == w4.variance,
                 "estimator output identical for 1 and 4 workers");
        const PointSample s = sample_poisson(kUnitSquare, 500.0, 916);
        const RadialTree t1 = build_rst(s, 1);
        const RadialTree t3 = build_rst(s, 3);
        c.expect(t1.parent == t3.parent && t1.edge_length == t3.edge_length,
                 "builder output identical for 1 and 3 workers");
    }
    return c.ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(CheckList&)> run;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only.push_back(std::atoi(argv[++i]));
    }

    const std::vector<Criterion> criteria{
        {1, "closed forms and quadrature cross-check", criterion_closed_forms},
        {2, "accelerated construction equals brute force", criterion_construction},
        {3, "expectation asymptotics", criterion_expectation_asymptotics},
        {4, "directed edge-length law", criterion_edge_length_law},
        {5, "variance asymptotics and v_a cross-estimators", criterion_variance_asymptotics},
        {6, "central-limit convergence rate", criterion_clt_rate},
        {7, "Mecke identity oracle", criterion_mecke},
        {8, "difference-operator conditions", criterion_difference_operators},
        {9, "property suites", criterion_property_suites},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end())
            continue;
        CheckList checks;
        bool ok = false;
        try {
            ok = crit.run(checks);
        } catch (const std::exception& e) {
            checks.ok = false;
            checks.detail << "  EXCEPTION: " << e.what() << "\n";
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << crit.id << ": "
                  << crit.name << "\n"
                  << checks.detail.str();
        if (!ok)
            ++failures;
    }
    if (failures == 0)
        std::cout << "all criteria passed\n";
    else
        std::cout << failures << " criterion(s) failed\n";
    return failures;
}
