// gossiplab: graph generation, spectral analysis, epsilon sweeps and Monte Carlo campaigns.

#include <gossiplab/analysis.hpp>
#include <gossiplab/graph.hpp>
#include <gossiplab/protocol.hpp>
#include <gossiplab/report.hpp>
#include <gossiplab/sim.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gossiplab;

namespace {

enum Exit { kOk = 0, kFailure = 1, kInvalidConfig = 2, kNumerical = 3, kRetryExhausted = 4 };

struct GraphSource {
    std::string path;
    std::size_t n = 16;
    std::string radius = "auto";
    double p_asym = 0.0;
    std::uint64_t seed = 1;
};

struct SchemeSource {
    std::string scheme = "bbga";
    std::string epsilon = "auto-optimal";
    double gamma = 0.5;
    std::string weights;
    std::string companion = "unbiased";
};

struct TrialSource {
    std::string init = "uniform";
    std::size_t trials = 100;
    double threshold = 1e-5;
    std::uint64_t max_iters = 10'000'000;
    std::uint64_t stride = 1;
    std::string stop_rule = "increment";
};

void add_graph_options(CLI::App* app, GraphSource& g) {
    app->add_option("--graph", g.path, "Edge-list file; when absent a random geometric graph is generated");
    app->add_option("--n", g.n, "Number of nodes")->capture_default_str();
    app->add_option("--radius", g.radius, "Connection radius or 'auto' for sqrt(2 ln n / n)")->capture_default_str();
    app->add_option("--p-asym", g.p_asym, "Probability of dropping one direction of each pair")->capture_default_str();
    app->add_option("--seed", g.seed, "Base seed")->capture_default_str();
}

void add_scheme_options(CLI::App* app, SchemeSource& s) {
    app->add_option("--scheme", s.scheme, "ubga1|ubga2|ubga3|bbga|classic|custom")->capture_default_str();
    app->add_option("--epsilon", s.epsilon, "Value, auto-optimal or auto-eta-fraction:f")->capture_default_str();
    app->add_option("--gamma", s.gamma, "Mixing weight of classic broadcast gossip")->capture_default_str();
    app->add_option("--weights", s.weights, "Custom A as 'i j a' lines (scheme=custom)");
    app->add_option("--companion", s.companion, "Companion rule for custom weights: unbiased|biased|none")
        ->capture_default_str();
}

void add_trial_options(CLI::App* app, TrialSource& t) {
    app->add_option("--init", t.init, "uniform|gaussian|spike|slope")->capture_default_str();
    app->add_option("--trials", t.trials, "Trials per campaign")->capture_default_str();
    app->add_option("--threshold", t.threshold, "Stopping threshold")->capture_default_str();
    app->add_option("--max-iters", t.max_iters, "Broadcast budget per trial")->capture_default_str();
    app->add_option("--stride", t.stride, "Evaluate the stopping rule every this many broadcasts")
        ->capture_default_str();
    app->add_option("--stop-rule", t.stop_rule, "increment (||dz||) or deviation (q)")->capture_default_str();
}

DiGraph load_or_generate(const GraphSource& src, OutputHeader& header, double* radius_out = nullptr) {
    if (!src.path.empty()) {
        std::ifstream in(src.path);
        if (!in) throw InvalidArgument("cannot open graph file '" + src.path + "'");
        header.add("graph", src.path);
        return read_edge_list(in);
    }
    const double radius = src.radius == "auto" ? default_rgg_radius(src.n) : std::stod(src.radius);
    header.add("n", std::to_string(src.n)).add("radius", src.radius).add("p-asym", format_double(src.p_asym));
    header.add("seed", std::to_string(src.seed));
    if (radius_out) *radius_out = radius;
    // The graph stream is decoupled from the trial seeds derived from the same base seed.
    Rng rng(splitmix64(src.seed ^ 0x6772617068ull));
    auto g = random_geometric_graph(src.n, radius, rng);
    if (src.p_asym > 0.0) g = directify(g, src.p_asym, rng);
    return g;
}

/// Resolves an epsilon setting against the BBGA Laplacian of `g`.
double resolve_epsilon(const std::string& setting, const DiGraph& g, bool* approximate = nullptr) {
    if (setting == "auto-optimal") {
        const auto er = epsilon_report(g);
        if (approximate) *approximate = er.approximate;
        return er.epsilon_star;
    }
    const std::string prefix = "auto-eta-fraction:";
    if (setting.rfind(prefix, 0) == 0) {
        const double f = std::stod(setting.substr(prefix.size()));
        if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("eta fraction must lie in (0, 1)");
        const auto er = epsilon_report(g);
        if (approximate) *approximate = !er.eta_formula;
        return f * er.eta_formula.value_or(er.eta_practical);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(setting, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != setting.size()) throw InvalidArgument("bad epsilon '" + setting + "'");
    return v;
}

CompanionRule parse_companion(const std::string& s) {
    if (s == "unbiased") return CompanionRule::Unbiased;
    if (s == "biased") return CompanionRule::Biased;
    if (s == "none") return CompanionRule::None;
    throw InvalidArgument("unknown companion rule '" + s + "'");
}

WeightedMatrix read_weights(const std::string& path, std::size_t n) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open weights file '" + path + "'");
    WeightedMatrix a = WeightedMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(ls >> i >> j >> v)) throw InvalidArgument("weights: expected 'i j a', got '" + line + "'");
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n) {
            throw InvalidArgument("weights: node id out of range in '" + line + "'");
        }
        a(i - 1, j - 1) = v;
    }
    return a;
}

ParamScheme make_scheme(const SchemeSource& src, const std::string& epsilon_spec, const DiGraph& g,
                        OutputHeader& header, bool* approximate = nullptr) {
    const auto kind = parse_scheme_kind(src.scheme);
    if (kind == SchemeKind::ClassicBGA) {
        header.add("gamma", format_double(src.gamma));
        return build_scheme(kind, g, 0.0, src.gamma);
    }
    const double eps = resolve_epsilon(epsilon_spec, g, approximate);
    header.add("epsilon_resolved", format_double(eps));
    if (kind == SchemeKind::Custom) {
        if (src.weights.empty()) throw InvalidArgument("scheme=custom needs --weights");
        header.add("weights", src.weights).add("companion", src.companion);
        return build_custom_scheme(g, read_weights(src.weights, g.size()), parse_companion(src.companion), eps);
    }
    return build_scheme(kind, g, eps);
}

TrialOptions trial_options(const TrialSource& t, OutputHeader& header) {
    TrialOptions o;
    o.threshold = t.threshold;
    o.max_iters = t.max_iters;
    o.stride = t.stride;
    o.rule = parse_stop_rule(t.stop_rule);
    header.add("init", t.init).add("trials", std::to_string(t.trials)).add("threshold", format_double(t.threshold));
    header.add("max-iters", std::to_string(t.max_iters)).add("stride", std::to_string(t.stride));
    header.add("stop-rule", t.stop_rule);
    return o;
}

fs::path output_path(const std::string& dir, const std::string& name) {
    fs::path d(dir);
    fs::create_directories(d);
    return d / name;
}

std::ofstream open_output(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw InvalidArgument("cannot write '" + p.string() + "'");
    return out;
}

/**
 * Appends "--key=value" for every config entry naming an option of the chosen
 * subcommand that the command line does not already set. Lines are key=value;
 * a leading "# " is tolerated so that an output header can be fed back in.
 * Keys that are not options (e.g. epsilon_resolved) are skipped.
 */
std::vector<std::string> with_config(CLI::App& app, std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path || args.empty()) return args;
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) {
        if (s->get_name() == args[0]) sub = s;
    }
    if (!sub) return args;

    std::ifstream in(*path);
    if (!in) throw InvalidArgument("cannot open config file '" + *path + "'");
    auto given = [&](const std::string& key) {
        for (const auto& a : args) {
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        }
        return false;
    };
    std::string line;
    while (std::getline(in, line)) {
        auto text = line;
        if (text.rfind("# ", 0) == 0) text = text.substr(2);
        const auto eq = text.find('=');
        if (eq == std::string::npos || text.empty() || text[0] == '#') continue;
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            const auto e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
        };
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (key == "config" || !sub->get_option_no_throw("--" + key) || given(key)) continue;
        args.push_back("--" + key + "=" + value);
    }
    return args;
}

// ---------------------------------------------------------------------------

int cmd_generate(const GraphSource& src, const std::string& out_dir, const std::string& file) {
    OutputHeader header;
    double radius = 0.0;
    GraphSource gen = src;
    gen.path.clear();
    const auto g = load_or_generate(gen, header, &radius);
    const auto p = output_path(out_dir, file);
    auto out = open_output(p);
    header.write_comment(out);
    write_edge_list(out, g);

    const auto er = epsilon_report(g);
    std::cout << "radius=" << format_double(radius) << '\n'
              << "n=" << g.size() << '\n'
              << "edges=" << g.edge_count() << '\n'
              << "strongly_connected=" << (is_strongly_connected(g) ? "yes" : "no") << '\n'
              << "xi2=" << format_double(er.xi2) << '\n'
              << "xi_n=" << format_double(er.xi_n) << '\n'
              << "spectrum_real=" << (er.spectrum_real ? "yes" : "no") << '\n'
              << "wrote " << p.string() << '\n';
    return kOk;
}

struct AnalyzeArgs {
    std::vector<std::string> checks;
    std::string grid;
    std::optional<double> xi_n;
    std::optional<double> xi2;
};

int cmd_analyze_formulas(const GraphSource& src, const AnalyzeArgs& args) {
    if (args.xi_n) std::cout << "eta=" << format_double(eta_bound(*args.xi_n, src.n)) << '\n';
    std::cout << "eta_practical=" << format_double(eta_practical(src.n)) << '\n';
    if (args.xi2) {
        const auto opt = optimal_epsilon(*args.xi2, src.n);
        std::cout << "epsilon_star=" << format_double(opt.epsilon) << '\n'
                  << "lambda2_at_star=" << format_double(opt.lambda2) << '\n';
    }
    return kOk;
}

int cmd_analyze(const GraphSource& src, const SchemeSource& ss, const AnalyzeArgs& args, const std::string& out_dir) {
    if (src.path.empty() && (args.xi_n || args.xi2)) return cmd_analyze_formulas(src, args);

    OutputHeader header;
    const auto g = load_or_generate(src, header);
    header.add("scheme", ss.scheme).add("epsilon", ss.epsilon);
    bool approximate = false;
    const auto scheme = make_scheme(ss, ss.epsilon, g, header, &approximate);
    const auto report = classify_expectation(scheme);
    const bool bbga_formulas = scheme.kind() == SchemeKind::BBGA;

    nlohmann::ordered_json j;
    j["header"] = header.to_json();
    j["scheme"] = scheme.label();
    j["expectation"] = spectral_report_json(report);
    std::optional<EpsilonReport> er;
    if (bbga_formulas) {
        er = epsilon_report(g);
        j["epsilon"] = epsilon_report_json(*er);
    } else {
        j["epsilon"] = nullptr;
        j["note"] = "stability bound and optimal epsilon are only defined for bbga; "
                    "the consensus prediction uses w1 alone";
    }

    for (const auto& check : args.checks) {
        if (check != "second-moment") throw InvalidArgument("unknown check '" + check + "'");
        if (scheme.rule() == CompanionRule::None) throw InvalidArgument("second-moment check needs companion weights");
        const Vector v = scheme.rule() == CompanionRule::Unbiased
                             ? Vector::Constant(static_cast<Eigen::Index>(g.size()), 1.0 / static_cast<double>(g.size()))
                             : companion_stationary_vector(scheme);
        const auto sm = second_moment_matrix(scheme, v);
        const double rho = spectral_radius(sm.deflated);
        j["second_moment"] = {{"rho", rho}, {"pass", rho < 1.0}};
        std::cout << "rho=" << format_double(rho) << '\n' << "rho<1: " << (rho < 1.0 ? "PASS" : "FAIL") << '\n';
    }

    std::vector<AnalysisRow> rows;
    std::vector<double> grid{scheme.epsilon()};
    if (!args.grid.empty() && scheme.rule() != CompanionRule::None) {
        grid.clear();
        std::istringstream gs(args.grid);
        for (std::string tok; std::getline(gs, tok, ',');) grid.push_back(std::stod(tok));
    }
    for (double e : grid) {
        const auto rep = scheme.rule() == CompanionRule::None ? report : classify_expectation(scheme.with_epsilon(e));
        rows.push_back({e, rep.second_largest_modulus, rep.is_simple_one,
                        er ? er->eta_formula : std::nullopt,
                        er ? std::optional<double>(er->epsilon_star) : std::nullopt});
    }

    const auto json_path = output_path(out_dir, "report.json");
    auto jout = open_output(json_path);
    jout << j.dump(2) << '\n';
    const auto csv_path = output_path(out_dir, "report.csv");
    auto cout_csv = open_output(csv_path);
    write_analysis_csv(cout_csv, header, rows);

    std::cout << "scheme=" << scheme.label() << '\n'
              << "is_simple_one=" << (report.is_simple_one ? "true" : "false") << '\n'
              << "second_largest_modulus=" << format_double(report.second_largest_modulus) << '\n';
    if (er) {
        if (er->eta_formula) std::cout << "eta=" << format_double(*er->eta_formula) << '\n';
        std::cout << "eta_practical=" << format_double(er->eta_practical) << '\n'
                  << "xi2=" << format_double(er->xi2) << '\n'
                  << "xi_n=" << format_double(er->xi_n) << '\n'
                  << "epsilon_star=" << format_double(er->epsilon_star) << (er->approximate ? " (approximate)" : "")
                  << '\n';
    } else {
        std::cout << "note: no eta or epsilon_star for this scheme; prediction from w1 only\n";
    }
    if (approximate) std::cout << "note: resolved epsilon is approximate (complex Laplacian spectrum)\n";
    std::cout << "wrote " << json_path.string() << '\n' << "wrote " << csv_path.string() << '\n';
    return kOk;
}

struct SweepArgs {
    std::vector<double> grid;
    double start = 0.02, stop = 1.0, step = 0.02;
};

int cmd_sweep(const GraphSource& src, const SchemeSource& ss, const TrialSource& ts, const SweepArgs& args,
              const std::string& out_dir, unsigned threads) {
    OutputHeader header;
    const auto g = load_or_generate(src, header);
    header.add("scheme", ss.scheme);
    const auto kind = parse_scheme_kind(ss.scheme);
    if (kind == SchemeKind::ClassicBGA) throw InvalidArgument("sweep: classic broadcast gossip has no epsilon");
    const auto grid = args.grid.empty() ? epsilon_grid(args.start, args.stop, args.step) : args.grid;
    std::string grid_text;
    for (double e : grid) grid_text += (grid_text.empty() ? "" : ",") + format_double(e);
    header.add("grid", grid_text);
    const auto scheme = make_scheme(ss, format_double(grid.front()), g, header);

    MonteCarloOptions mc;
    mc.trial = trial_options(ts, header);
    mc.init = parse_init_kind(ts.init);
    mc.trials = ts.trials;
    mc.base_seed = src.seed;
    mc.threads = threads;
    const auto points = epsilon_sweep(scheme, g, grid, mc);

    const auto p = output_path(out_dir, "sweep.csv");
    auto out = open_output(p);
    write_sweep_csv(out, header, points);

    std::size_t failed = 0;
    const SweepPoint* best = nullptr;
    for (const auto& pt : points) {
        failed += pt.result.failed;
        if (!best || pt.result.mean_broadcasts < best->result.mean_broadcasts) best = &pt;
    }
    std::cout << "points=" << points.size() << '\n'
              << "best_epsilon=" << format_double(best->epsilon) << '\n'
              << "best_mean_broadcasts=" << format_double(best->result.mean_broadcasts) << '\n'
              << "wrote " << p.string() << '\n';
    if (failed) {
        std::cerr << "error: " << failed << " trial(s) failed\n";
        return kNumerical;
    }
    return kOk;
}

struct SimulateArgs {
    std::vector<std::string> schemes{"classic", "ubga1", "bbga"};
    bool per_trial = false;
    bool predict = true;
    std::string svg;
};

int cmd_simulate(const GraphSource& src, const SchemeSource& ss, const TrialSource& ts, const SimulateArgs& args,
                 const std::string& out_dir, unsigned threads) {
    OutputHeader base;
    const auto g = load_or_generate(src, base);
    MonteCarloOptions mc;
    mc.trial = trial_options(ts, base);
    mc.init = parse_init_kind(ts.init);
    mc.trials = ts.trials;
    mc.base_seed = src.seed;
    mc.threads = threads;
    mc.predict = args.predict;

    std::vector<ChartSeries> chart;
    std::size_t failed = 0;
    for (const auto& token : args.schemes) {
        // kind[@epsilon]
        const auto at = token.find('@');
        SchemeSource s = ss;
        s.scheme = token.substr(0, at);
        const std::string eps_setting = at == std::string::npos ? ss.epsilon : token.substr(at + 1);
        OutputHeader header = base;
        header.add("schemes", token);
        if (at == std::string::npos && s.scheme != "classic") header.add("epsilon", eps_setting);
        const auto scheme = make_scheme(s, eps_setting, g, header);
        const auto res = monte_carlo(scheme, g, mc);
        const auto traj = aggregate_trajectory(res.records);

        std::string stem = token;
        std::replace(stem.begin(), stem.end(), '@', '_');
        std::replace(stem.begin(), stem.end(), ':', '_');
        const auto tp = output_path(out_dir, "trajectory_" + stem + ".csv");
        auto out = open_output(tp);
        write_aggregate_trajectory_csv(out, header, traj);
        const auto rp = output_path(out_dir, "trials_" + stem + ".csv");
        auto rout = open_output(rp);
        write_trials_csv(rout, header, res.records);
        if (args.per_trial) {
            for (std::size_t i = 0; i < res.records.size(); ++i) {
                auto pout = open_output(output_path(out_dir, "trial_" + stem + "_" + std::to_string(i) + ".csv"));
                write_trial_trajectory_csv(pout, header, res.records[i]);
            }
        }

        ChartSeries series{scheme.label() + " r(t)", {}};
        for (const auto& pt : traj) series.points.emplace_back(static_cast<double>(pt.t), pt.mean_r);
        chart.push_back(std::move(series));

        failed += res.failed;
        std::cout << scheme.label() << ": converged=" << res.converged << '/' << res.trials
                  << " failed=" << res.failed << " mean_broadcasts=" << format_double(res.mean_broadcasts)
                  << " mean_r_final=" << format_double(res.mean_r_final)
                  << " mean_q_final=" << format_double(res.mean_q_final) << '\n';
        for (const auto& rec : res.records) {
            if (rec.failed) std::cerr << "  trial seed " << rec.seed << ": " << rec.failure << '\n';
        }
        std::cout << "wrote " << tp.string() << '\n';
    }
    if (!args.svg.empty()) {
        const auto sp = output_path(out_dir, args.svg);
        auto out = open_output(sp);
        write_svg_chart(out, "mean r(t), init=" + ts.init, chart);
        std::cout << "wrote " << sp.string() << '\n';
    }
    if (failed) {
        std::cerr << "error: " << failed << " trial(s) failed\n";
        return kNumerical;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broadcast gossip consensus: analysis and simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    std::string out_dir = ".";
    unsigned threads = 0;

    GraphSource gsrc;
    SchemeSource ssrc;
    TrialSource tsrc;
    std::string graph_file = "graph.txt";
    AnalyzeArgs analyze_args;
    SweepArgs sweep_args;
    SimulateArgs sim_args;

    std::string config_path;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value file; output headers can be replayed as configs");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads (default: GOSSIPLAB_THREADS or all cores)");
        add_graph_options(sub, gsrc);
    };

    auto* gen = app.add_subcommand("generate", "Generate a random geometric graph");
    common(gen);
    gen->add_option("--file", graph_file, "Output file name inside --out")->capture_default_str();

    auto* an = app.add_subcommand("analyze", "Spectral analysis of the expected update");
    common(an);
    add_scheme_options(an, ssrc);
    an->add_option("--check", analyze_args.checks, "Extra checks: second-moment");
    an->add_option("--grid", analyze_args.grid, "Comma-separated epsilons for report.csv");
    an->add_option("--xi-n", analyze_args.xi_n, "Evaluate the stability bound for this largest Laplacian eigenvalue");
    an->add_option("--xi2", analyze_args.xi2, "Evaluate the optimal epsilon for this second Laplacian eigenvalue");

    auto* sw = app.add_subcommand("sweep", "Monte Carlo campaigns over an epsilon grid");
    common(sw);
    add_scheme_options(sw, ssrc);
    add_trial_options(sw, tsrc);
    sw->add_option("--grid", sweep_args.grid, "Explicit epsilon values")->delimiter(',');
    sw->add_option("--grid-start", sweep_args.start)->capture_default_str();
    sw->add_option("--grid-stop", sweep_args.stop)->capture_default_str();
    sw->add_option("--grid-step", sweep_args.step)->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Monte Carlo campaigns for several schemes on one graph");
    common(sim);
    add_scheme_options(sim, ssrc);
    add_trial_options(sim, tsrc);
    sim->add_option("--schemes", sim_args.schemes, "Comma-separated kind[@epsilon] tokens")
        ->delimiter(',')
        ->capture_default_str();
    sim->add_flag("--per-trial", sim_args.per_trial, "Also write every trial's r(t), q(t)");
    sim->add_option("--svg", sim_args.svg, "Write an SVG chart of mean r(t) with this file name");

    try {
        auto args = with_config(app, std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (*gen) return cmd_generate(gsrc, out_dir, graph_file);
        if (*an) return cmd_analyze(gsrc, ssrc, analyze_args, out_dir);
        if (*sw) return cmd_sweep(gsrc, ssrc, tsrc, sweep_args, out_dir, threads);
        if (*sim) return cmd_simulate(gsrc, ssrc, tsrc, sim_args, out_dir, threads);
    } catch (const RetryExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRetryExhausted;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
