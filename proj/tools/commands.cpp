#include "commands.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "stpp/catalog.hpp"
#include "stpp/inference.hpp"
#include "stpp/intensity.hpp"
#include "stpp/parallel.hpp"
#include "stpp/serialize.hpp"
#include "stpp/simulate.hpp"
#include "stpp/weights.hpp"

namespace stpp::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

const std::set<std::string> kDataKeys{"input", "window", "marks", "mark_reference", "mark_weights",
                                      "ground_nodes", "mark_nodes", "factor_nodes", "refinements"};

std::set<std::string> with_data(std::initializer_list<std::string> extra) {
    std::set<std::string> keys = kDataKeys;
    keys.insert(extra.begin(), extra.end());
    return keys;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + p.string() + "'");
    return out;
}

fs::path prepare_out(const RunFlags& flags) {
    if (flags.out.empty()) throw ConfigError("--out is required");
    std::error_code ec;
    fs::create_directories(flags.out, ec);
    if (ec) throw std::ios_base::failure("cannot create output directory '" + flags.out + "'");
    return fs::path(flags.out);
}

std::uint64_t resolve_seed(const Config& cfg, const RunFlags& flags) {
    if (flags.seed) {
        cfg.str("seed", std::to_string(*flags.seed));
        return *flags.seed;
    }
    const long long s = cfg.integer("seed", static_cast<long long>(kDefaultSeed));
    if (s < 0) throw ConfigError("seed must be >= 0");
    return static_cast<std::uint64_t>(s);
}

void write_echo(const fs::path& dir, const std::string& command, const Config& cfg) {
    auto out = open_out(dir / "config.txt");
    out << "# " << command << "\n" << cfg.echo();
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    auto out = open_out(p);
    out << j.dump(2) << "\n";
}

Quadrature quadrature_of(const Config& cfg) {
    Quadrature q;
    q.ground_nodes = static_cast<int>(cfg.integer("ground_nodes", q.ground_nodes));
    q.mark_nodes = static_cast<int>(cfg.integer("mark_nodes", q.mark_nodes));
    q.factor_nodes = static_cast<int>(cfg.integer("factor_nodes", q.factor_nodes));
    q.refinements = static_cast<int>(cfg.integer("refinements", q.refinements));
    if (q.ground_nodes < 1 || q.mark_nodes < 1 || q.factor_nodes < 1 || q.refinements < 0) {
        throw ConfigError("quadrature node counts must be >= 1 and refinements >= 0");
    }
    return q;
}

struct Dataset {
    CatalogLoad load;
    std::string path;
};

Dataset load_data(const Config& cfg) {
    fs::path path = cfg.required("input");
    if (path.is_relative() && !cfg.base_dir().empty() && !fs::exists(path)) {
        path = fs::path(cfg.base_dir()) / path;
    }
    const Window w = parse_window(cfg.str("window", "0,1; 0,1; 0,1"));
    const MarkSpace ms = parse_mark_space(cfg.str("marks", "labels:2"), cfg.str("mark_reference", "lebesgue"),
                                          cfg.str("mark_weights", ""));
    Dataset d{load_catalog(path.string(), w, ms), path.string()};
    for (const auto& warn : d.load.warnings) std::cerr << "warning: " << warn << "\n";
    return d;
}

nlohmann::json load_json(const Dataset& d) {
    return {{"input", d.path},
            {"rows_read", d.load.rows_read},
            {"points", d.load.pattern.size()},
            {"dropped_outside", d.load.dropped_outside},
            {"duplicates", d.load.duplicates},
            {"warnings", d.load.warnings}};
}

LagGrid lags_of(const Config& cfg, const Window& w) {
    const int n = static_cast<int>(cfg.integer("n_lags", 20));
    if (n < 1) throw ConfigError("n_lags must be >= 1");
    const LagGrid def = default_lag_grid(w, n);
    const double rmax = cfg.number("r_max", def.r.back());
    const double tmax = cfg.number("t_max", def.t.back());
    if (!(rmax > 0.0) || !(tmax > 0.0)) throw ConfigError("r_max and t_max must be > 0");
    LagGrid g;
    for (int k = 1; k <= n; ++k) {
        g.r.push_back(rmax * k / n);
        g.t.push_back(tmax * k / n);
    }
    return g;
}

KOptions koptions_of(const Config& cfg) {
    KOptions opt;
    try {
        opt.scenario = parse_scenario(cfg.str("scenario", "S2"));
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    const std::string er = cfg.str("erosion", "per-cell");
    if (er == "fixed") opt.erosion = ErosionMode::Fixed;
    else if (er != "per-cell") throw ConfigError("erosion must be per-cell or fixed");
    return opt;
}

WeightsSpec weights_of(const Config& cfg) {
    try {
        return parse_weights_spec(cfg.str("weights", "voronoi-ground"));
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

MarkSet markset_of(const Config& cfg, const std::string& key) {
    try {
        return MarkSet::parse(cfg.str(key, "all"));
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> midpoints(const Interval& iv, int n) {
    std::vector<double> out;
    for (int k = 0; k < n; ++k) out.push_back(iv.lo + (k + 0.5) * iv.length() / n);
    return out;
}

}  // namespace

void cmd_simulate(const Config& cfg, const RunFlags& flags) {
    cfg.check_keys({"preset", "seed", "p", "sigma2", "matern_nu", "matern_c", "grid_cells", "mark_lo", "mark_hi"});
    const std::uint64_t seed = resolve_seed(cfg, flags);
    const std::string preset = cfg.required("preset");
    bool known = false;
    for (const auto& n : preset_names()) known = known || n == preset;
    if (!known) throw ConfigError("unknown preset '" + preset + "'");
    PresetOptions opt;
    opt.p = cfg.number("p", opt.p);
    opt.sigma2 = cfg.number("sigma2", opt.sigma2);
    opt.matern_nu = cfg.number("matern_nu", opt.matern_nu);
    opt.matern_c = cfg.number("matern_c", opt.matern_c);
    opt.grid_cells = static_cast<int>(cfg.integer("grid_cells", opt.grid_cells));
    opt.mark_lo = cfg.number("mark_lo", opt.mark_lo);
    opt.mark_hi = cfg.number("mark_hi", opt.mark_hi);
    const fs::path dir = prepare_out(flags);

    const PresetDraw draw = simulate_preset(preset, opt, seed);
    {
        auto out = open_out(dir / "catalog.csv");
        write_catalog(out, draw.pattern);
    }
    nlohmann::json meta;
    meta["command"] = "simulate";
    meta["preset"] = preset;
    meta["seed"] = seed;
    meta["points"] = draw.pattern.size();
    meta["expected_count"] = draw.expected_count;
    meta["window"] = format_window(draw.pattern.window());
    meta["mark_space"] = draw.pattern.mark_space().describe();
    write_json(dir / "metadata.json", meta);
    write_echo(dir, "simulate", cfg);
    std::cout << "simulated " << draw.pattern.size() << " points (" << preset << ", seed " << seed << ")\n";
}

void cmd_intensity(const Config& cfg, const RunFlags& flags) {
    cfg.check_keys(with_data({"estimator", "eval_nodes", "eval_mark_nodes", "seed"}));
    resolve_seed(cfg, flags);
    const Dataset data = load_data(cfg);
    const MarkedPattern& p = data.load.pattern;
    const Quadrature q = quadrature_of(cfg);
    const std::string est = cfg.str("estimator", "ground");
    const int n_eval = static_cast<int>(cfg.integer("eval_nodes", 20));
    const int n_mark_eval = static_cast<int>(cfg.integer("eval_mark_nodes", 10));
    if (n_eval < 1 || n_mark_eval < 1) throw ConfigError("evaluation node counts must be >= 1");
    const fs::path dir = prepare_out(flags);

    const int d = p.dim();
    const Window& w = p.window();
    std::vector<std::string> header;
    if (d == 2) {
        header = {"x", "y"};
    } else {
        for (int a = 0; a < d; ++a) header.push_back("x" + std::to_string(a + 1));
    }
    header.push_back("t");
    std::vector<double> mark_nodes;
    if (const auto* l = std::get_if<MarkSpace::FiniteLabels>(&p.mark_space().kind())) {
        for (int k = 1; k <= l->k; ++k) mark_nodes.push_back(k);
    } else {
        const auto& c = std::get<MarkSpace::Continuous>(p.mark_space().kind());
        mark_nodes = midpoints({c.lo, c.hi}, n_mark_eval);
    }

    std::function<double(const std::vector<double>&, double, double)> eval;
    std::optional<VoronoiEstimate> vor;
    std::optional<SeparableIntensity> sep;
    bool marked = true;
    double integral = 0.0;
    const Quadrature check{q.ground_nodes + q.ground_nodes / 4, q.mark_nodes + q.mark_nodes / 4,
                           q.factor_nodes + q.factor_nodes / 4, q.refinements};
    if (est == "ground" || est == "marked") {
        vor = est == "ground" ? voronoi_ground(p, q) : voronoi_marked(p, q);
        marked = est == "marked";
        eval = [&vor, d](const std::vector<double>& x, double t, double m) {
            double c[10];
            for (int a = 0; a < d; ++a) c[a] = x[static_cast<std::size_t>(a)];
            c[d] = t;
            c[d + 1] = m;
            return vor->value_at(c);
        };
        integral = vor->integral(check);
    } else {
        SeparableSetup s;
        if (est == "separable-S1") s = SeparableSetup::S1_CommonMark;
        else if (est == "separable-S2") s = SeparableSetup::S2_NonSepCommonMark;
        else if (est == "separable-S3") s = SeparableSetup::S3_TimeMark;
        else throw ConfigError("unknown estimator '" + est + "' (ground, marked, separable-S1|S2|S3)");
        sep = voronoi_separable(p, s, {}, q);
        eval = [&sep](const std::vector<double>& x, double t, double m) { return sep->value(x, t, m); };
        integral = sep->integral(check);
    }
    if (!marked) mark_nodes = {0.0};
    else header.push_back("m");
    header.push_back("lambda_hat");

    std::vector<std::vector<double>> axes;
    for (int a = 0; a < d; ++a) axes.push_back(midpoints(w.spatial(a), n_eval));
    axes.push_back(midpoints(w.temporal(), n_eval));
    std::vector<std::vector<double>> rows;
    std::vector<int> idx(static_cast<std::size_t>(d + 1), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (;;) {
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = axes[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        const double t = axes[static_cast<std::size_t>(d)][static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        for (double m : mark_nodes) {
            std::vector<double> row(x);
            row.push_back(t);
            if (marked) row.push_back(m);
            row.push_back(eval(x, t, m));
            rows.push_back(std::move(row));
        }
        int a = d;
        while (a >= 0 && idx[static_cast<std::size_t>(a)] == n_eval - 1) idx[static_cast<std::size_t>(a--)] = 0;
        if (a < 0) break;
        ++idx[static_cast<std::size_t>(a)];
    }
    {
        auto out = open_out(dir / "intensity.csv");
        write_csv(out, header, rows);
    }
    if (vor) {
        auto out = open_out(dir / "cell_measures.csv");
        write_cell_measures(out, *vor);
    }
    const double n = static_cast<double>(p.size());
    const double rel = std::abs(integral - n) / n;
    nlohmann::json meta;
    meta["command"] = "intensity";
    meta["estimator"] = est;
    meta["data"] = load_json(data);
    meta["quadrature"] = {{"ground_nodes", q.ground_nodes}, {"mark_nodes", q.mark_nodes},
                          {"factor_nodes", q.factor_nodes}, {"refinements", q.refinements}};
    meta["mass"] = {{"integral", integral}, {"points", p.size()}, {"relative_error", rel}};
    meta["floor_hits"] = vor ? vor->floor_hits() : sep->floor_hits();
    write_json(dir / "intensity.json", meta);
    write_echo(dir, "intensity", cfg);
    std::cout << "mass check: integral " << format_number(integral) << " vs N " << p.size()
              << " (relative error " << format_number(rel) << ")\n";
}

void cmd_k(const Config& cfg, const RunFlags& flags) {
    cfg.check_keys(with_data({"C", "D", "scenario", "erosion", "weights", "n_lags", "r_max", "t_max",
                              "smooth_n", "smooth_p", "seed"}));
    const std::uint64_t seed = resolve_seed(cfg, flags);
    const Dataset data = load_data(cfg);
    const MarkedPattern& p = data.load.pattern;
    const Quadrature q = quadrature_of(cfg);
    const MarkSet c = markset_of(cfg, "C");
    const MarkSet d = markset_of(cfg, "D");
    const KOptions opt = koptions_of(cfg);
    const WeightsSpec spec = weights_of(cfg);
    const LagGrid grid = lags_of(cfg, p.window());
    const int smooth_n = static_cast<int>(cfg.integer("smooth_n", 0));
    const double smooth_p = cfg.number("smooth_p", 0.5);
    if (smooth_n < 0) throw ConfigError("smooth_n must be >= 0");
    const fs::path dir = prepare_out(flags);

    KSurface k = opt.scenario == Scenario::Stationary
                     ? k_stationary(p, c, d, grid, opt.erosion)
                     : k_inhom(p, c, d, grid, plugged_weights(p, spec, q), opt);
    k.seed = seed;
    {
        auto out = open_out(dir / "k.csv");
        write_ksurface_csv(out, k);
    }
    nlohmann::json meta = ksurface_json(k);
    meta["command"] = "k";
    meta["weights"] = opt.scenario == Scenario::Stationary ? "stationary" : to_string(spec);
    meta["data"] = load_json(data);
    write_json(dir / "k.json", meta);

    if (smooth_n > 0) {
        if (opt.scenario == Scenario::Stationary) throw ConfigError("smoothing needs an inhomogeneous scenario");
        const KSurface ks = k_smoothed(p, c, d, grid, smooth_p, smooth_n, weights_builder(spec, q), seed, opt);
        auto out = open_out(dir / "k_smoothed.csv");
        write_ksurface_csv(out, ks);
        nlohmann::json sm = ksurface_json(ks);
        sm["command"] = "k";
        sm["weights"] = to_string(spec);
        sm["spread"] = ks.spread;
        write_json(dir / "k_smoothed.json", sm);
    }
    write_echo(dir, "k", cfg);
    std::cout << "K surface: " << grid.r.size() << " x " << grid.t.size() << " lags, "
              << p.size() << " points\n";
}

void cmd_test(const Config& cfg, const RunFlags& flags) {
    cfg.check_keys(with_data({"C", "D", "scenario", "erosion", "weights", "n_lags", "r_max", "t_max",
                              "n_perm", "rank", "alpha", "fixed_weights", "seed"}));
    const std::uint64_t seed = resolve_seed(cfg, flags);
    const Dataset data = load_data(cfg);
    const MarkedPattern& p = data.load.pattern;
    const Quadrature q = quadrature_of(cfg);
    const MarkSet c = markset_of(cfg, "C");
    const MarkSet d = markset_of(cfg, "D");
    LabellingOptions opt;
    opt.k = koptions_of(cfg);
    if (opt.k.scenario == Scenario::Stationary) throw ConfigError("the labelling test needs an inhomogeneous scenario");
    const WeightsSpec spec = weights_of(cfg);
    const LagGrid grid = lags_of(cfg, p.window());
    opt.n_perm = static_cast<int>(cfg.integer("n_perm", 99));
    if (opt.n_perm < 1) throw ConfigError("n_perm must be >= 1");
    const std::string rank = cfg.str("rank", "minmax");
    if (rank == "pointwise") opt.rule.rule = RankRule::Pointwise;
    else if (rank != "minmax") throw ConfigError("rank must be minmax or pointwise");
    opt.rule.alpha = cfg.number("alpha", 0.05);
    opt.fixed_weights = cfg.flag("fixed_weights", false);
    const fs::path dir = prepare_out(flags);

    const EnvelopeSet e = random_labelling_test(p, c, d, grid, weights_builder(spec, q), seed, opt);
    {
        auto out = open_out(dir / "envelope.csv");
        write_envelope_csv(out, e);
    }
    nlohmann::json meta = envelope_json(e);
    meta["command"] = "test";
    meta["C"] = c.to_string();
    meta["D"] = d.to_string();
    meta["scenario"] = to_string(opt.k.scenario);
    meta["weights"] = to_string(spec);
    meta["data"] = load_json(data);
    write_json(dir / "envelope.json", meta);
    {
        auto out = open_out(dir / "summary.txt");
        out << "random labelling test, Delta = K^{CD} - K^{DC}\n";
        out << "C = " << c.to_string() << ", D = " << d.to_string() << ", points = " << p.size() << "\n";
        out << envelope_summary(e);
    }
    write_echo(dir, "test", cfg);
    std::cout << "exceedance: " << e.exceeded_cells() << " of " << e.exceeds.size() << " cells\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Second-order analysis of marked spatio-temporal point patterns"};
    app.require_subcommand(1);
    std::string config_path;
    std::uint64_t seed = 0;
    RunFlags flags;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"simulate", "simulate a preset model and write its catalog"},
        {"intensity", "Voronoi intensity estimate on a grid"},
        {"k", "marked inhomogeneous K surface"},
        {"test", "random labelling test with envelopes"}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "key = value configuration file");
        s->add_option("--seed", seed, "root random seed");
        s->add_option("--out", flags.out, "output directory")->required();
        s->add_option("--threads", flags.threads, "worker thread cap (0 = all cores)");
        subs.push_back(s);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        for (const auto* s : subs) {
            if (s->parsed() && s->count("--seed") > 0) flags.seed = seed;
        }
        set_max_threads(flags.threads);
        const Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "simulate") cmd_simulate(cfg, flags);
        else if (name == "intensity") cmd_intensity(cfg, flags);
        else if (name == "k") cmd_k(cfg, flags);
        else cmd_test(cfg, flags);
        return 0;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace stpp::cli
