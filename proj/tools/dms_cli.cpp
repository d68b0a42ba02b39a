// Command-line surface of the toolkit: simulate (Monte Carlo growth),
// propagate (exact distribution evolution), steady (closed forms), compare,
// convergence, firstpassage, plot.  Every command writes a JSON manifest
// next to its outputs.  Exit codes: 0 success, 2 usage/validation,
// 3 I/O failure, 4 numeric invariant breach.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dms/analysis.hpp"
#include "dms/errors.hpp"
#include "dms/io.hpp"
#include "dms/propagator.hpp"
#include "dms/simulator.hpp"
#include "dms/steady_state.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;
using namespace dms;

namespace {

using Clock = std::chrono::steady_clock;

fs::path resolve_out(const std::string& out, const std::string& default_name) {
    if (!out.empty()) return out;
    const char* dir = std::getenv("DMS_OUT_DIR");
    return fs::path(dir ? dir : ".") / default_name;
}

io::RunManifest start_manifest(const std::string& command, const std::vector<std::string>& argv) {
    io::RunManifest m;
    m.command = command;
    m.argv = argv;
    m.started_at = io::iso8601_now();
    return m;
}

void finish_manifest(io::RunManifest& m, const fs::path& primary_output) {
    m.finished_at = io::iso8601_now();
    io::write_manifest(io::manifest_path(primary_output), m);
}

std::vector<std::int64_t> parse_checkpoints(const std::string& arg) {
    std::vector<std::int64_t> out;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::domain_error("checkpoints: empty element in list");
        std::size_t pos = 0;
        const long long v = std::stoll(item, &pos);
        if (pos != item.size()) throw std::domain_error("checkpoints: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::domain_error("checkpoints: empty list");
    return out;
}

Rational parse_rational(const std::string& arg) {
    const auto slash = arg.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= arg.size())
        throw std::domain_error("--A-rational expects the form p/q, got '" + arg + "'");
    Rational r;
    r.num = std::stoull(arg.substr(0, slash));
    r.den = std::stoull(arg.substr(slash + 1));
    if (r.den == 0) throw std::domain_error("--A-rational: denominator must be nonzero");
    return r;
}

std::string stem_suffix(const fs::path& base, const std::string& suffix) {
    fs::path p = base;
    const std::string ext = p.extension().string();
    p.replace_extension();
    return p.string() + suffix + ext;
}

void write_distribution_json_sidecar(const fs::path& csv_out, const DegreeDistribution& d,
                                     const ModelParams& p, io::RunManifest& manifest) {
    const fs::path jpath = fs::path(csv_out).replace_extension(".json");
    std::ofstream os(jpath);
    if (!os) throw io_error("cannot open '" + jpath.string() + "'");
    os << io::distribution_json(d, &p) << '\n';
    manifest.outputs.push_back(jpath.string());
}

// ---- simulate ----
struct SimulateArgs {
    int m = 1;
    double A = 1.0;
    std::int64_t steps = 1;
    std::uint64_t seed = 0;
    int replicas = 1;
    bool edges = false;
    std::string a_rational;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args, const std::vector<std::string>& argv) {
    GrowthConfig c;
    c.params = ModelParams(args.m, args.A);
    c.steps = args.steps;
    c.seed = args.seed;
    c.replicas = args.replicas;
    c.record_edges = args.edges;
    if (!args.a_rational.empty()) {
        const Rational r = parse_rational(args.a_rational);
        c.params = ModelParams(args.m, r.value());
        c.a_rational = r;
    }
    if (args.edges && args.replicas > 1)
        throw std::domain_error("simulate: --edges is only supported with --replicas 1");

    const fs::path out = resolve_out(
        args.out, "simulate_m" + std::to_string(args.m) + "_T" + std::to_string(args.steps) +
                      "_seed" + std::to_string(args.seed) + ".csv");

    io::RunManifest manifest = start_manifest("simulate", argv);
    manifest.seed = args.seed;
    const auto t0 = Clock::now();

    nlohmann::json extra;
    extra["config"] = {{"m", c.params.m},        {"A", c.params.A},
                       {"steps", c.steps},       {"seed", c.seed},
                       {"replicas", c.replicas}, {"record_edges", c.record_edges}};

    if (c.replicas == 1) {
        const SimulatedNetwork net = grow(c);
        const DegreeDistribution hist = degree_histogram(net);
        std::map<std::int64_t, std::int64_t> counts;
        for (std::uint32_t q : net.in_degree) ++counts[static_cast<std::int64_t>(q)];
        io::write_distribution_csv(out, hist, &counts);
        manifest.outputs.push_back(out.string());
        if (c.record_edges) {
            const fs::path epath = stem_suffix(out, "_edges");
            std::ofstream es(epath);
            if (!es) throw io_error("cannot open '" + epath.string() + "'");
            io::write_edges_csv(es, net.edges);
            manifest.outputs.push_back(epath.string());
        }
        extra["totals"] = {{"nodes", net.node_count()},
                           {"links", net.in_degree_sum()},
                           {"max_degree", hist.max_degree()}};
    } else {
        const ReplicateResult res = replicate(c);
        io::write_distribution_csv(out, res.average);
        manifest.outputs.push_back(out.string());
        for (int r = 0; r < c.replicas; ++r) {
            const fs::path rpath = stem_suffix(out, "_r" + std::to_string(r));
            io::write_distribution_csv(rpath, res.per_replica[r]);
            manifest.outputs.push_back(rpath.string());
        }
        extra["totals"] = {{"nodes_per_replica", c.steps}, {"replicas", c.replicas}};
    }

    extra["elapsed_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    manifest.extra_json = extra.dump();
    finish_manifest(manifest, out);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

// ---- propagate ----
struct PropagateArgs {
    int m = 1;
    double A = 1.0;
    std::int64_t steps = 0;
    std::string mode = "aggregate";
    std::int64_t node = 0;
    std::string checkpoints;
    double eps = 1e-12;
    bool json = false;
    std::string out;
};

int cmd_propagate(const PropagateArgs& args, const std::vector<std::string>& argv) {
    const ModelParams p(args.m, args.A);
    std::vector<std::int64_t> cps;
    if (!args.checkpoints.empty())
        cps = parse_checkpoints(args.checkpoints);
    else if (args.steps >= 1)
        cps = {args.steps};
    else
        throw std::domain_error("propagate: give --steps or --checkpoints");

    const fs::path out = resolve_out(
        args.out, "propagate_" + args.mode + "_m" + std::to_string(args.m) + ".csv");
    io::RunManifest manifest = start_manifest("propagate", argv);
    PropagationOptions opt;
    opt.eps = args.eps;

    std::vector<std::pair<std::int64_t, DegreeDistribution>> snapshots;
    if (args.mode == "aggregate") {
        for (const AggregateState& s : propagate_aggregate(p, cps, opt))
            snapshots.emplace_back(s.t, s.to_distribution());
    } else if (args.mode == "per-node") {
        if (args.node < 1) throw std::domain_error("propagate: per-node mode needs --node >= 1");
        for (const PerNodeState& s : per_node_trajectory(p, args.node, cps))
            snapshots.emplace_back(s.t, s.to_distribution());
    } else {
        throw std::domain_error("propagate: unknown mode '" + args.mode + "'");
    }

    for (const auto& [t, d] : snapshots) {
        const fs::path path =
            snapshots.size() == 1 ? out : fs::path(stem_suffix(out, "_t" + std::to_string(t)));
        io::write_distribution_csv(path, d);
        manifest.outputs.push_back(path.string());
        if (args.json) write_distribution_json_sidecar(path, d, p, manifest);
    }

    nlohmann::json extra;
    extra["mode"] = args.mode;
    extra["eps"] = args.eps;
    if (args.mode == "per-node") extra["node"] = args.node;
    manifest.extra_json = extra.dump();
    finish_manifest(manifest, out);
    for (const std::string& o : manifest.outputs) std::cout << "wrote " << o << '\n';
    return 0;
}

// ---- steady ----
struct SteadyArgs {
    int m = 1;
    double A = 1.0;
    std::int64_t qmax = 100;
    std::string form = "recurrence";
    bool json = false;
    std::string out;
};

int cmd_steady(const SteadyArgs& args, const std::vector<std::string>& argv) {
    const ModelParams p(args.m, args.A);
    DegreeDistribution d;
    if (args.form == "recurrence") {
        d = steady_recurrence(p, args.qmax);
    } else if (args.form == "gamma") {
        if (args.qmax < 0) throw std::domain_error("steady: qmax must be >= 0");
        double sum = 0.0;
        for (std::int64_t q = 0; q <= args.qmax; ++q) {
            d.entries[q] = steady_gamma(p, q);
            sum += d.entries[q];
        }
        d.tail_mass = 1.0 - sum;
    } else if (args.form == "ba") {
        if (args.A != static_cast<double>(args.m))
            throw std::domain_error("steady: the ba form requires A = m (got A=" +
                                    std::to_string(args.A) + ", m=" + std::to_string(args.m) + ")");
        double sum = 0.0;
        for (std::int64_t q = 0; q <= args.qmax; ++q) {
            d.entries[q] = steady_ba_special(args.m, q);
            sum += d.entries[q];
        }
        d.tail_mass = 1.0 - sum;
    } else {
        throw std::domain_error("steady: unknown form '" + args.form + "'");
    }

    const fs::path out = resolve_out(args.out, "steady_" + args.form + "_m" +
                                                   std::to_string(args.m) + ".csv");
    io::RunManifest manifest = start_manifest("steady", argv);
    io::write_distribution_csv(out, d);
    manifest.outputs.push_back(out.string());
    if (args.json) write_distribution_json_sidecar(out, d, p, manifest);

    nlohmann::json extra;
    extra["form"] = args.form;
    extra["q_max"] = args.qmax;
    extra["tail_mass"] = d.tail_mass;
    extra["tail_exponent"] = tail_exponent(p);
    manifest.extra_json = extra.dump();
    finish_manifest(manifest, out);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

// ---- compare ----
struct CompareArgs {
    std::string left, right;
    std::string left_label, right_label;
    std::int64_t q_min = -1, q_max = -1;
    std::string out;
};

int cmd_compare(const CompareArgs& args, const std::vector<std::string>& argv) {
    std::map<std::int64_t, double> left_counts;
    const DegreeDistribution left = io::read_distribution_csv(fs::path(args.left), &left_counts);
    const DegreeDistribution right = io::read_distribution_csv(fs::path(args.right));

    std::optional<std::pair<std::int64_t, std::int64_t>> range;
    if (args.q_min >= 0 || args.q_max >= 0) {
        if (args.q_min < 0 || args.q_max < 0)
            throw std::domain_error("compare: give both --q-min and --q-max or neither");
        range = {{args.q_min, args.q_max}};
    }

    const ComparisonReport rep = compare_report(
        left, right, args.left_label.empty() ? args.left : args.left_label,
        args.right_label.empty() ? args.right : args.right_label, range,
        left_counts.empty() ? nullptr : &left_counts);

    const fs::path out = resolve_out(args.out, "compare.json");
    io::RunManifest manifest = start_manifest("compare", argv);
    {
        std::ofstream os(out);
        if (!os) throw io_error("cannot open '" + out.string() + "'");
        os << io::comparison_report_json(rep) << '\n';
    }
    manifest.outputs.push_back(out.string());
    manifest.extra_json = io::comparison_report_json(rep);
    finish_manifest(manifest, out);
    std::cout << "tv=" << io::format_double(rep.tv) << " ks=" << io::format_double(rep.ks)
              << " chi2=" << io::format_double(rep.chi2.statistic) << " (dof " << rep.chi2.dof
              << ")\n";
    return 0;
}

// ---- convergence ----
struct ConvergenceArgs {
    int m = 1;
    double A = 1.0;
    std::int64_t q = 0;
    std::string checkpoints;
    double eps = 1e-12;
    std::string out;
};

int cmd_convergence(const ConvergenceArgs& args, const std::vector<std::string>& argv) {
    const ModelParams p(args.m, args.A);
    const std::vector<std::int64_t> cps = parse_checkpoints(args.checkpoints);
    PropagationOptions opt;
    opt.eps = args.eps;
    const ConvergenceSeries series = convergence_diagnostic(p, args.q, cps, opt);

    const fs::path out = resolve_out(args.out, "convergence_q" + std::to_string(args.q) + ".csv");
    io::RunManifest manifest = start_manifest("convergence", argv);
    {
        std::ofstream os(out);
        if (!os) throw io_error("cannot open '" + out.string() + "'");
        io::write_convergence_csv(os, series);
    }
    manifest.outputs.push_back(out.string());

    nlohmann::json extra;
    extra["q"] = args.q;
    extra["damping"] = series.damping;
    if (args.q == 0 && p.A > 0) extra["limit_p_zero"] = p_zero(p);
    manifest.extra_json = extra.dump();
    finish_manifest(manifest, out);
    std::cout << "wrote " << out.string() << (series.damping ? " (damping)" : " (not damping)")
              << '\n';
    return 0;
}

// ---- firstpassage ----
struct FirstPassageArgs {
    int m = 1;
    double A = 1.0;
    std::int64_t node = 2;
    std::int64_t q = 1;
    std::int64_t t = 2;
    std::string out;
};

int cmd_firstpassage(const FirstPassageArgs& args, const std::vector<std::string>& argv) {
    const ModelParams p(args.m, args.A);
    const FirstPassageTable table = first_passage(p, args.node, args.q, args.t);
    const double residual = verify_passage_identity(p, args.node, args.q, args.t);

    const fs::path out = resolve_out(args.out, "firstpassage_i" + std::to_string(args.node) +
                                                   "_q" + std::to_string(args.q) + ".csv");
    io::RunManifest manifest = start_manifest("firstpassage", argv);
    {
        std::ofstream os(out);
        if (!os) throw io_error("cannot open '" + out.string() + "'");
        io::write_first_passage_csv(os, table, args.q);
    }
    manifest.outputs.push_back(out.string());

    nlohmann::json extra;
    extra["node"] = args.node;
    extra["q"] = args.q;
    extra["t"] = args.t;
    extra["t0"] = first_passage_floor(args.node, args.q, p);
    extra["identity_residual"] = residual;
    extra["sum_f"] = table.sum_over_s(args.q);
    manifest.extra_json = extra.dump();
    finish_manifest(manifest, out);
    std::cout << "f(" << args.q << "," << args.node << ",t) for t<=" << args.t << " written; "
              << "identity residual " << io::format_double(residual) << '\n';
    return 0;
}

// ---- plot ----
struct PlotArgs {
    std::string in;
    std::string out;
    bool loglog = false;
    int overlay_m = 0;
    double overlay_A = 0.0;
};

int cmd_plot(const PlotArgs& args, const std::vector<std::string>& argv) {
    const DegreeDistribution d = io::read_distribution_csv(fs::path(args.in));
    if (d.entries.empty()) throw std::domain_error("plot: input has no rows");

    plot::PlotSpec spec;
    spec.loglog = args.loglog;
    spec.title = fs::path(args.in).filename().string();

    plot::Series data;
    data.label = "data";
    for (const auto& [q, p] : d.entries)
        data.points.emplace_back(static_cast<double>(q), p);
    spec.series.push_back(std::move(data));

    if (args.overlay_m >= 1) {
        const ModelParams p(args.overlay_m, args.overlay_A);
        plot::Series overlay;
        overlay.color = "#c0392b";
        overlay.label = "closed form";
        overlay.line_only = true;
        for (const auto& [q, mass] : d.entries)
            if (q >= 0) overlay.points.emplace_back(static_cast<double>(q), steady_gamma(p, q));
        spec.series.push_back(std::move(overlay));
    }

    if (args.loglog) {
        // annotate the fitted tail slope when there is enough support
        const std::int64_t q_hi = d.max_degree();
        const std::int64_t q_lo = std::max<std::int64_t>(10, q_hi / 100);
        try {
            const TailFit fit = fit_tail(d, q_lo, q_hi, TailFitMethod::loglog_ls);
            std::ostringstream note;
            note.precision(3);
            note << "tail slope " << std::fixed << fit.slope << " (loglog-ls on [" << q_lo << ","
                 << q_hi << "])";
            spec.annotation = note.str();
        } catch (const std::domain_error&) {
            // too few points; plot without the annotation
        }
    }

    const fs::path out = resolve_out(args.out, fs::path(args.in).stem().string() + ".svg");
    io::RunManifest manifest = start_manifest("plot", argv);
    {
        std::ofstream os(out);
        if (!os) throw io_error("cannot open '" + out.string() + "'");
        plot::render_svg(os, spec);
    }
    manifest.outputs.push_back(out.string());
    finish_manifest(manifest, out);
    std::cout << "wrote " << out.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"growing-network degree distributions: Monte Carlo, exact propagation, closed forms"};
    app.require_subcommand(1);
    const std::vector<std::string> raw_argv(argv, argv + argc);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "grow networks and emit the degree histogram");
    simulate->add_option("--m", sim.m, "links per step")->required();
    simulate->add_option("--A", sim.A, "initial attractiveness");
    simulate->add_option("--A-rational", sim.a_rational, "A as p/q; enables exact integer weights");
    simulate->add_option("--steps", sim.steps, "final node count")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed");
    simulate->add_option("--replicas", sim.replicas, "independent replicas");
    simulate->add_flag("--edges", sim.edges, "record the edge list");
    simulate->add_option("--out", sim.out, "output CSV path");

    PropagateArgs prop;
    CLI::App* propagate = app.add_subcommand("propagate", "evolve the exact degree distribution");
    propagate->add_option("--m", prop.m, "links per step")->required();
    propagate->add_option("--A", prop.A, "initial attractiveness");
    propagate->add_option("--steps", prop.steps, "horizon T");
    propagate->add_option("--mode", prop.mode, "aggregate | per-node");
    propagate->add_option("--node", prop.node, "node birth time (per-node mode)");
    propagate->add_option("--checkpoints", prop.checkpoints, "comma-separated times");
    propagate->add_option("--eps", prop.eps, "support truncation budget");
    propagate->add_flag("--json", prop.json, "also write the JSON form of each dump");
    propagate->add_option("--out", prop.out, "output CSV path");

    SteadyArgs steady;
    CLI::App* steady_cmd = app.add_subcommand("steady", "closed-form steady-state distribution");
    steady_cmd->add_option("--m", steady.m, "links per step")->required();
    steady_cmd->add_option("--A", steady.A, "initial attractiveness");
    steady_cmd->add_option("--qmax", steady.qmax, "largest degree to emit");
    steady_cmd->add_option("--form", steady.form, "recurrence | gamma | ba");
    steady_cmd->add_flag("--json", steady.json, "also write the JSON form of the distribution");
    steady_cmd->add_option("--out", steady.out, "output CSV path");

    CompareArgs cmp;
    CLI::App* compare = app.add_subcommand("compare", "metrics between two distribution files");
    compare->add_option("left", cmp.left, "left CSV")->required();
    compare->add_option("right", cmp.right, "right CSV")->required();
    compare->add_option("--left-label", cmp.left_label, "label for the left input");
    compare->add_option("--right-label", cmp.right_label, "label for the right input");
    compare->add_option("--q-min", cmp.q_min, "restrict metrics to q >= q_min");
    compare->add_option("--q-max", cmp.q_max, "restrict metrics to q <= q_max");
    compare->add_option("--out", cmp.out, "output JSON path");

    ConvergenceArgs conv;
    CLI::App* convergence = app.add_subcommand("convergence", "P(q,t) trend and damping diagnostic");
    convergence->add_option("--m", conv.m, "links per step")->required();
    convergence->add_option("--A", conv.A, "initial attractiveness");
    convergence->add_option("--q", conv.q, "degree to track")->required();
    convergence->add_option("--checkpoints", conv.checkpoints, "comma-separated times")->required();
    convergence->add_option("--eps", conv.eps, "support truncation budget");
    convergence->add_option("--out", conv.out, "output CSV path");

    FirstPassageArgs fp;
    CLI::App* firstpassage =
        app.add_subcommand("firstpassage", "first-passage probabilities and identity check");
    firstpassage->add_option("--m", fp.m, "links per step")->required();
    firstpassage->add_option("--A", fp.A, "initial attractiveness");
    firstpassage->add_option("--node", fp.node, "node birth time")->required();
    firstpassage->add_option("--q", fp.q, "target degree")->required();
    firstpassage->add_option("--t", fp.t, "horizon")->required();
    firstpassage->add_option("--out", fp.out, "output CSV path");

    PlotArgs plt;
    CLI::App* plot_cmd = app.add_subcommand("plot", "static SVG of a distribution file");
    plot_cmd->add_option("--in", plt.in, "input CSV")->required();
    plot_cmd->add_option("--out", plt.out, "output SVG path");
    plot_cmd->add_flag("--loglog", plt.loglog, "log-log axes with tail-slope annotation");
    plot_cmd->add_option("--overlay-m", plt.overlay_m, "overlay closed form with this m");
    plot_cmd->add_option("--overlay-A", plt.overlay_A, "overlay closed form with this A");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(simulate)) return cmd_simulate(sim, raw_argv);
        if (app.got_subcommand(propagate)) return cmd_propagate(prop, raw_argv);
        if (app.got_subcommand(steady_cmd)) return cmd_steady(steady, raw_argv);
        if (app.got_subcommand(compare)) return cmd_compare(cmp, raw_argv);
        if (app.got_subcommand(convergence)) return cmd_convergence(conv, raw_argv);
        if (app.got_subcommand(firstpassage)) return cmd_firstpassage(fp, raw_argv);
        if (app.got_subcommand(plot_cmd)) return cmd_plot(plt, raw_argv);
    } catch (const schema_error& e) {
        std::cerr << "input schema error: " << e.what() << '\n';
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric invariant breach: " << e.what() << '\n';
        return 4;
    } catch (const io_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
