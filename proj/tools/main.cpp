// Command-line front end: seeded simulation and estimation runs with
// reproducible JSON/CSV outputs.
//
// Exit codes: 0 success, 2 invalid configuration, 3 resource limit.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rspan/estimators.hpp"
#include "rspan/functionals.hpp"
#include "rspan/parallel.hpp"
#include "rspan/point_sample.hpp"
#include "rspan/rng.hpp"
#include "rspan/spanning.hpp"
#include "rspan/stats.hpp"
#include "rspan/version.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace rspan;

namespace {

struct RunConfig {
    std::string command;
    std::string window_kind = "box";
    std::vector<double> lower{-0.5, -0.5};
    std::vector<double> upper{0.5, 0.5};
    double radius = 1.0;
    int dim = 2;
    std::string graph = "rst";
    std::vector<double> direction; // empty = first axis
    double margin = -1.0;          // < 0 = default dilation margin
    double a = 1.0;
    double t = 1000.0;
    std::vector<double> t_list;
    std::string method = "ball"; // va: ball | integral
    double r = 8.0;
    double r_trunc = 6.0;
    size_t z_samples = 400;
    size_t replicates = 400;
    std::vector<double> a_list; // checks
    uint64_t seed = 0;
    unsigned workers = 0; // 0 = hardware default
    std::string out = ".";
    std::string format = "json";
};

json window_to_json(const RunConfig& c) {
    json w;
    w["kind"] = c.window_kind;
    if (c.window_kind == "box") {
        w["lower"] = c.lower;
        w["upper"] = c.upper;
    } else {
        w["dim"] = c.dim;
        w["radius"] = c.radius;
    }
    return w;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["window"] = window_to_json(c);
    j["graph"] = c.graph;
    j["direction"] = c.direction;
    j["margin"] = c.margin;
    j["a"] = c.a;
    j["t"] = c.t;
    j["t_list"] = c.t_list;
    j["method"] = c.method;
    j["r"] = c.r;
    j["r_trunc"] = c.r_trunc;
    j["z_samples"] = c.z_samples;
    j["replicates"] = c.replicates;
    j["a_list"] = c.a_list;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["format"] = c.format;
    return j;
}

void config_from_json(const json& j, RunConfig& c) {
    c.command = j.value("command", c.command);
    if (j.contains("window")) {
        const json& w = j.at("window");
        c.window_kind = w.value("kind", c.window_kind);
        if (w.contains("lower"))
            c.lower = w.at("lower").get<std::vector<double>>();
        if (w.contains("upper"))
            c.upper = w.at("upper").get<std::vector<double>>();
        c.radius = w.value("radius", c.radius);
        c.dim = w.value("dim", c.dim);
    }
    c.graph = j.value("graph", c.graph);
    if (j.contains("direction"))
        c.direction = j.at("direction").get<std::vector<double>>();
    c.margin = j.value("margin", c.margin);
    c.a = j.value("a", c.a);
    c.t = j.value("t", c.t);
    if (j.contains("t_list"))
        c.t_list = j.at("t_list").get<std::vector<double>>();
    c.method = j.value("method", c.method);
    c.r = j.value("r", c.r);
    c.r_trunc = j.value("r_trunc", c.r_trunc);
    c.z_samples = j.value("z_samples", c.z_samples);
    c.replicates = j.value("replicates", c.replicates);
    if (j.contains("a_list"))
        c.a_list = j.at("a_list").get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.format = j.value("format", c.format);
}

Window make_window(const RunConfig& c) {
    if (c.window_kind == "box")
        return Window::box(c.lower, c.upper);
    if (c.window_kind == "ball")
        return Window::ball(c.dim, c.radius);
    throw std::invalid_argument("unknown window kind: " + c.window_kind);
}

int window_dim(const RunConfig& c) {
    return c.window_kind == "box" ? static_cast<int>(c.lower.size()) : c.dim;
}

Direction make_direction(const RunConfig& c) {
    if (c.direction.empty())
        return Direction::axis(window_dim(c), 0);
    return Direction::normalized(c.direction);
}

unsigned effective_workers(const RunConfig& c) {
    return c.workers == 0 ? default_workers() : c.workers;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file: " + path.string());
    os << content;
}

json summary_to_json(const SummaryStats& st) {
    return json{{"n", st.n},
                {"mean", st.mean},
                {"variance", st.variance},
                {"std_error_mean", st.std_error_mean},
                {"std_error_variance", st.std_error_variance}};
}

json va_to_json(const VaEstimate& va) {
    return json{{"method", va.method == VaEstimate::Method::BallVariance
                               ? "ball_variance"
                               : "covariance_integral"},
                {"a", va.a},
                {"d", va.d},
                {"value", va.value},
                {"std_error", va.std_error},
                {"radius", va.radius},
                {"margin", va.margin},
                {"tail_curve_bound", va.tail_curve_bound},
                {"replicates", va.replicates},
                {"z_samples", va.z_samples},
                {"ci_excludes_zero", va.ci_excludes_zero()}};
}

// Every command writes `<command>.json` carrying the full configuration,
// tool version and results. All numeric content is a pure function of the
// configuration; only runtime_ms varies between identical runs.
void write_record(const RunConfig& c, const json& results, const json& metadata,
                  double runtime_ms) {
    json record;
    record["tool"] = kToolName;
    record["version"] = kToolVersion;
    record["operation"] = c.command;
    record["config"] = config_to_json(c);
    record["seed"] = c.seed;
    record["replicates"] = c.replicates;
    record["results"] = results;
    record["metadata"] = metadata;
    record["runtime_ms"] = runtime_ms;
    fs::create_directories(c.out);
    write_text_file(fs::path(c.out) / (c.command + ".json"), record.dump(2) + "\n");
}

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int cmd_simulate(const RunConfig& c) {
    const Stopwatch watch;
    const Window w = make_window(c);
    if (c.t < 0.0) {
        std::cerr << "invalid intensity: t must be >= 0\n";
        return 2;
    }
    fs::create_directories(c.out);

    json results;
    json metadata;
    if (c.graph == "rst") {
        const PointSample s = sample_poisson(w, c.t, c.seed);
        const RadialTree tree = build_rst(s, effective_workers(c));
        std::ofstream points(fs::path(c.out) / "points.csv", std::ios::binary);
        write_points_csv(points, s);
        std::ofstream edges(fs::path(c.out) / "edges.csv", std::ios::binary);
        write_edges_csv(edges, tree.parent, tree.edge_length);
        results["points"] = s.size();
        results["functional_a"] = c.a;
        results["functional_value"] = eval_rst_functional(tree, c.a).value;
        metadata["duplicate_rejections"] = s.duplicate_rejections;
    } else if (c.graph == "dsf") {
        const double margin = c.margin < 0.0 ? default_dilation_margin(w.dim()) : c.margin;
        const Direction e = make_direction(c);
        const PointSample s = sample_poisson_dilated(w, c.t, margin, c.seed);
        const DirectedForest forest = build_dsf(s, e, effective_workers(c));
        std::ofstream points(fs::path(c.out) / "points.csv", std::ios::binary);
        write_points_csv(points, s);
        std::ofstream edges(fs::path(c.out) / "edges.csv", std::ios::binary);
        write_edges_csv(edges, forest.parent, forest.edge_length);
        results["points"] = s.size();
        results["functional_a"] = c.a;
        results["functional_value"] = eval_dsf_functional(s, forest, w, c.a).value;
        metadata["margin"] = margin;
        metadata["direction"] = std::vector<double>(e.coords().begin(), e.coords().end());
        metadata["duplicate_rejections"] = s.duplicate_rejections;
    } else {
        throw std::invalid_argument("unknown graph kind: " + c.graph);
    }
    write_record(c, results, metadata, watch.ms());
    return 0;
}

int cmd_mean(const RunConfig& c) {
    const Stopwatch watch;
    const Window w = make_window(c);
    const SummaryStats st =
        estimate_rst_mean(w, c.t, c.a, c.replicates, c.seed, effective_workers(c));
    json results = summary_to_json(st);
    results["limit_closed_form"] = expectation_limit(c.a, w.dim(), w.volume());
    write_record(c, results, json::object(), watch.ms());
    return 0;
}

int cmd_variance(const RunConfig& c) {
    const Stopwatch watch;
    const Window w = make_window(c);
    const SummaryStats st =
        estimate_rst_variance(w, c.t, c.a, c.replicates, c.seed, effective_workers(c));
    json results = summary_to_json(st);
    json metadata;
    metadata["scaling"] = "mean by t^(a/d-1), variance by t^(2a/d-1)";
    write_record(c, results, metadata, watch.ms());
    return 0;
}

int cmd_va(const RunConfig& c) {
    const Stopwatch watch;
    const int d = window_dim(c);
    const Direction e = make_direction(c);
    VaEstimate va;
    if (c.method == "ball") {
        va = estimate_va_ball(c.r, c.a, d, e, c.replicates, c.seed, effective_workers(c));
    } else if (c.method == "integral") {
        va = estimate_va_integral(c.r_trunc, c.a, d, e, c.z_samples, c.replicates, c.seed,
                                  effective_workers(c));
    } else {
        throw std::invalid_argument("unknown va method: " + c.method);
    }
    write_record(c, va_to_json(va), json::object(), watch.ms());
    return 0;
}

int cmd_clt(const RunConfig& c) {
    const Stopwatch watch;
    const Window w = make_window(c);
    std::vector<double> t_list = c.t_list;
    if (t_list.empty())
        t_list = {64.0, 256.0, 1024.0};
    const CltResult res =
        clt_experiment(w, c.a, t_list, c.replicates, c.seed, effective_workers(c));

    json rows = json::array();
    std::string csv = "t,ks,ks_stderr\n";
    for (const auto& row : res.rows) {
        rows.push_back({{"t", row.t}, {"ks", row.ks}, {"ks_std_error", row.ks_std_error}});
        std::string line;
        append_double(line, row.t);
        line.push_back(',');
        append_double(line, row.ks);
        line.push_back(',');
        append_double(line, row.ks_std_error);
        line.push_back('\n');
        csv += line;
    }
    json results;
    results["rows"] = rows;
    results["loglog_slope"] = res.loglog_slope;
    json metadata;
    metadata["standardization"] = "empirical mean and standard deviation per t";
    write_record(c, results, metadata, watch.ms());
    fs::create_directories(c.out);
    write_text_file(fs::path(c.out) / "clt.csv", csv);
    return 0;
}

int cmd_checks(const RunConfig& c) {
    const Stopwatch watch;
    const Window w = make_window(c);
    const int d = w.dim();
    const unsigned workers = effective_workers(c);

    std::vector<double> t_list = c.t_list;
    if (t_list.empty())
        t_list = {250.0, 1000.0};
    std::vector<double> a_list = c.a_list;
    if (a_list.empty())
        a_list = {0.0, 0.5, 1.0, 2.0};

    json results;

    // window tail constant probe
    const TailBoundParams params = alpha_probe(w, 25, 4000, derive_stream_seed(c.seed, 100));
    results["alpha_probe"] = {{"alpha_w", params.alpha_w},
                              {"note", "empirical lower-bound probe, not certified"}};

    // Mecke identity grid
    json mecke = json::array();
    for (double a : a_list) {
        for (double t : t_list) {
            const MeckePair pair = mecke_check(w, t, a, c.replicates,
                                               derive_stream_seed(c.seed, 200), workers);
            mecke.push_back({{"a", a},
                             {"t", t},
                             {"lhs", summary_to_json(pair.lhs)},
                             {"rhs", summary_to_json(pair.rhs)},
                             {"gap_sigmas", pair.combined_gap_sigmas()}});
        }
    }
    results["mecke"] = mecke;

    // difference-operator moment scan. Probes sit away from the origin; a
    // probe exactly at the root is degenerate.
    std::vector<double> lo, hi;
    w.bounding_box(lo, hi);
    std::vector<double> near(static_cast<size_t>(d), 0.0);
    std::vector<double> quarter(static_cast<size_t>(d));
    std::vector<double> z2(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        near[static_cast<size_t>(i)] = 0.1 * hi[static_cast<size_t>(i)];
        quarter[static_cast<size_t>(i)] = 0.5 * hi[static_cast<size_t>(i)];
        z2[static_cast<size_t>(i)] =
            near[static_cast<size_t>(i)] + (i == 0 ? 0.02 : 0.0);
    }
    std::vector<double> moment_ts = {250.0, 1000.0, 4000.0};
    const DiffMomentReport moments = diff_moment_check(
        w, moment_ts, c.a, {near, quarter}, {{near, z2}}, c.replicates,
        derive_stream_seed(c.seed, 300), workers);
    json mo;
    mo["t_scan"] = moments.t_scan;
    mo["first_moment5"] = moments.first_moment5;
    mo["second_moment5"] = moments.second_moment5;
    mo["growth_bounded_factor2"] = moments.growth_bounded(2.0);
    results["diff_moments"] = mo;

    // second-difference decay against the dominating curve
    const double t_decay = t_list.back();
    const double spacing = std::pow(t_decay, -1.0 / d);
    std::vector<double> seps;
    for (int k = 1; k <= 8; ++k)
        seps.push_back(0.5 * k * spacing);
    const Diff2DecayReport decay =
        diff2_decay_check(w, t_decay, c.a, seps, c.replicates,
                          derive_stream_seed(c.seed, 400), params, workers);
    json de;
    de["t"] = decay.t;
    de["alpha_w"] = decay.alpha_w;
    de["rows"] = json::array();
    for (const auto& row : decay.rows)
        de["rows"].push_back({{"separation", row.separation},
                              {"freq", row.freq},
                              {"std_error", row.std_error},
                              {"bound", row.bound}});
    de["below_bound_3sigma"] = decay.below_bound(3.0);
    de["log_freq_slope"] = decay.log_freq_slope();
    results["diff2_decay"] = de;

    // radial edge tail against the bound curve
    std::vector<std::vector<double>> xs = {near, quarter};
    std::vector<double> us;
    for (int k = 1; k <= 4; ++k)
        us.push_back(k * std::pow(t_list.front(), -1.0 / d));
    const auto tail_rows = rst_tail_check(w, t_list.front(), xs, us, c.replicates,
                                          derive_stream_seed(c.seed, 500), params, workers);
    json tails = json::array();
    bool tail_ok = true;
    for (const auto& row : tail_rows) {
        tails.push_back({{"x", row.x},
                         {"u", row.u},
                         {"freq", row.freq},
                         {"std_error", row.std_error},
                         {"bound", row.bound}});
        tail_ok = tail_ok && row.freq <= row.bound + 3.0 * row.std_error;
    }
    results["rst_tail"] = {{"t", t_list.front()}, {"rows", tails}, {"below_bound_3sigma", tail_ok}};

    write_record(c, results, json::object(), watch.ms());

    if (c.format == "csv") {
        std::string csv = "separation,freq,std_error,bound\n";
        for (const auto& row : decay.rows) {
            std::string line;
            append_double(line, row.separation);
            line.push_back(',');
            append_double(line, row.freq);
            line.push_back(',');
            append_double(line, row.std_error);
            line.push_back(',');
            append_double(line, row.bound);
            line.push_back('\n');
            csv += line;
        }
        write_text_file(fs::path(c.out) / "checks_decay.csv", csv);
    }
    return 0;
}

int dispatch(const RunConfig& c) {
    if (c.command == "simulate")
        return cmd_simulate(c);
    if (c.command == "mean")
        return cmd_mean(c);
    if (c.command == "variance")
        return cmd_variance(c);
    if (c.command == "va")
        return cmd_va(c);
    if (c.command == "clt")
        return cmd_clt(c);
    if (c.command == "checks")
        return cmd_checks(c);
    throw std::invalid_argument("unknown command: " + c.command);
}

int cmd_replay(const std::string& record_path, const std::string& out_override) {
    std::ifstream is(record_path);
    if (!is) {
        std::cerr << "cannot open record: " << record_path << "\n";
        return 2;
    }
    json record;
    is >> record;
    RunConfig c;
    config_from_json(record.at("config"), c);
    if (!out_override.empty())
        c.out = out_override;
    return dispatch(c);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spanning-graph Monte Carlo toolkit: radial trees and directed "
                 "forests over Poisson samples, edge-length functionals, and "
                 "convergence experiments"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::string replay_path;
    std::string replay_out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "master seed (required unless in --config)");
        sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware)");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--format", cfg.format, "csv or json table output")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", config_path, "JSON config file; flags override");
    };
    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--window", cfg.window_kind, "box or ball")
            ->check(CLI::IsMember({"box", "ball"}));
        sub->add_option("--lo", cfg.lower, "box lower corner")->delimiter(',');
        sub->add_option("--hi", cfg.upper, "box upper corner")->delimiter(',');
        sub->add_option("--radius", cfg.radius, "ball radius");
        sub->add_option("--d", cfg.dim, "dimension (ball windows)");
    };

    auto* sim = app.add_subcommand("simulate", "one seeded realization to points/edges CSV");
    add_common(sim);
    add_window(sim);
    sim->add_option("--graph", cfg.graph, "rst or dsf")->check(CLI::IsMember({"rst", "dsf"}));
    sim->add_option("--t", cfg.t, "intensity");
    sim->add_option("--a", cfg.a, "functional exponent");
    sim->add_option("--e", cfg.direction, "direction vector (dsf)")->delimiter(',');
    sim->add_option("--margin", cfg.margin, "dilation margin (dsf; <0 = default)");

    auto* mean = app.add_subcommand("mean", "scaled-mean estimate of the edge functional");
    add_common(mean);
    add_window(mean);
    mean->add_option("--t", cfg.t, "intensity");
    mean->add_option("--a", cfg.a, "functional exponent");
    mean->add_option("--replicates", cfg.replicates, "replicate count");

    auto* var = app.add_subcommand("variance", "scaled-variance estimate of the edge functional");
    add_common(var);
    add_window(var);
    var->add_option("--t", cfg.t, "intensity");
    var->add_option("--a", cfg.a, "functional exponent");
    var->add_option("--replicates", cfg.replicates, "replicate count");

    auto* va = app.add_subcommand("va", "limiting variance density estimators");
    add_common(va);
    va->add_option("--method", cfg.method, "ball or integral")
        ->check(CLI::IsMember({"ball", "integral"}));
    va->add_option("--a", cfg.a, "functional exponent");
    va->add_option("--d", cfg.dim, "dimension");
    va->add_option("--e", cfg.direction, "direction vector")->delimiter(',');
    va->add_option("--r", cfg.r, "ball radius (method ball)");
    va->add_option("--rtrunc", cfg.r_trunc, "truncation radius (method integral)");
    va->add_option("--zsamples", cfg.z_samples, "z draws (method integral)");
    va->add_option("--replicates", cfg.replicates, "replicate count");

    auto* clt = app.add_subcommand("clt", "Kolmogorov-distance scan along a t list");
    add_common(clt);
    add_window(clt);
    clt->add_option("--a", cfg.a, "functional exponent");
    clt->add_option("--t", cfg.t_list, "t list")->delimiter(',');
    clt->add_option("--replicates", cfg.replicates, "replicates per t");

    auto* checks = app.add_subcommand("checks", "identity, moment and tail checks in one report");
    add_common(checks);
    add_window(checks);
    checks->add_option("--a", cfg.a, "functional exponent for difference scans");
    checks->add_option("--a-list", cfg.a_list, "exponent grid for the identity check")
        ->delimiter(',');
    checks->add_option("--t-list", cfg.t_list, "t grid")->delimiter(',');
    checks->add_option("--replicates", cfg.replicates, "replicate count");

    auto* replay = app.add_subcommand("replay", "re-run a recorded configuration");
    replay->add_option("record", replay_path, "record JSON from a previous run")->required();
    replay->add_option("--out", replay_out, "output directory override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (replay->parsed())
            return cmd_replay(replay_path, replay_out);

        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();

        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "cannot open config: " << config_path << "\n";
                return 2;
            }
            json j;
            is >> j;
            RunConfig merged;
            merged.command = cfg.command;
            config_from_json(j, merged);
            auto overridden = [&](const std::string& name) { return sub->count(name) > 0; };
            if (overridden("--seed")) merged.seed = cfg.seed;
            if (overridden("--workers")) merged.workers = cfg.workers;
            if (overridden("--out") || !j.contains("out")) merged.out = cfg.out;
            if (overridden("--format")) merged.format = cfg.format;
            if (overridden("--window")) merged.window_kind = cfg.window_kind;
            if (overridden("--lo")) merged.lower = cfg.lower;
            if (overridden("--hi")) merged.upper = cfg.upper;
            if (overridden("--radius")) merged.radius = cfg.radius;
            if (overridden("--d")) merged.dim = cfg.dim;
            if (sub->get_option_no_throw("--graph") && overridden("--graph"))
                merged.graph = cfg.graph;
            if (sub->get_option_no_throw("--e") && overridden("--e"))
                merged.direction = cfg.direction;
            if (sub->get_option_no_throw("--margin") && overridden("--margin"))
                merged.margin = cfg.margin;
            if (sub->get_option_no_throw("--a") && overridden("--a")) merged.a = cfg.a;
            if (sub->get_option_no_throw("--t") && overridden("--t")) {
                merged.t = cfg.t;
                merged.t_list = cfg.t_list;
            }
            if (sub->get_option_no_throw("--method") && overridden("--method"))
                merged.method = cfg.method;
            if (sub->get_option_no_throw("--r") && overridden("--r")) merged.r = cfg.r;
            if (sub->get_option_no_throw("--rtrunc") && overridden("--rtrunc"))
                merged.r_trunc = cfg.r_trunc;
            if (sub->get_option_no_throw("--zsamples") && overridden("--zsamples"))
                merged.z_samples = cfg.z_samples;
            if (sub->get_option_no_throw("--replicates") && overridden("--replicates"))
                merged.replicates = cfg.replicates;
            if (sub->get_option_no_throw("--a-list") && overridden("--a-list"))
                merged.a_list = cfg.a_list;
            if (sub->get_option_no_throw("--t-list") && overridden("--t-list"))
                merged.t_list = cfg.t_list;
            if (!overridden("--seed") && !j.contains("seed")) {
                std::cerr << "seed is required (flag or config file)\n";
                return 2;
            }
            cfg = merged;
            cfg.command = sub->get_name();
        } else if (sub->count("--seed") == 0) {
            std::cerr << "seed is required\n";
            return 2;
        }
        return dispatch(cfg);
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
