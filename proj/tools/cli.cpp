#include "cli.hpp"

#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucn/error.hpp"
#include "ucn/eval.hpp"
#include "ucn/hce.hpp"
#include "ucn/synth.hpp"
#include "ucn/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace ucn::cli {

namespace {

bool quiet = false;

// Progress lines go to stderr so stdout stays clean for metrics JSON.
std::ostream& status() {
    static std::ostream null(nullptr);
    return quiet ? null : std::clog;
}

struct SimulateArgs {
    std::string spec_path;
    bool example = false;
    std::size_t random_n = 0;
    std::size_t steps = 2000;
    std::uint64_t seed = 0;
    int tau_max = 5;
    bool hide_env = false;
    std::string out_dir;
};

struct DiscoverArgs {
    std::string panel_path;
    std::string method = "hce";
    int tau_max = 5;
    double alpha = 0.01;
    double beta = 0.02;
    int k = 4;
    double jitter = 1e-10;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out_path;
    std::string scores_path;
};

struct EvaluateArgs {
    std::vector<std::string> predicted;
    std::vector<std::string> scores;
    std::vector<std::string> truth;
    bool roc = false;
    std::size_t thresholds = 101;
    bool collapse_lags = false;
    std::string out_path;
    std::string roc_csv;
    std::string rows_csv;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

json manifest(const std::string& command, const std::vector<std::string>& argv, json config,
              std::vector<std::uint64_t> seeds, json inputs, json outputs, double seconds) {
    json m;
    m["tool"] = "ucn";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = argv;
    m["config"] = std::move(config);
    m["seeds"] = std::move(seeds);
    m["inputs"] = std::move(inputs);
    m["outputs"] = std::move(outputs);
    m["wall_clock_seconds"] = seconds;
    return m;
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    const int sources = (a.spec_path.empty() ? 0 : 1) + (a.example ? 1 : 0) + (a.random_n ? 1 : 0);
    if (sources != 1) throw ConfigError("give exactly one of --spec, --example, --random");

    StructuralSpec spec;
    std::string source;
    if (a.example) {
        spec = example_network();
        source = "example";
    } else if (a.random_n) {
        spec = random_spec(a.random_n, a.seed);
        source = "random";
    } else {
        spec = read_spec(a.spec_path);
        source = a.spec_path;
    }

    const fs::path dir(a.out_dir);
    ensure_dir(dir);
    GenerateOptions opts;
    opts.hide_env = a.hide_env;
    opts.truth_tau_max = std::max(a.tau_max, spec.max_lag());
    const auto generated = generate(spec, a.steps, a.seed, opts);

    const auto panel_path = dir / "panel.csv";
    const auto truth_path = dir / "truth.json";
    const auto spec_path = dir / "spec.json";
    write_panel_csv(panel_path.string(), generated.panel);
    write_text(truth_path, network_to_json(generated.truth));
    write_text(spec_path, spec_to_json(spec));

    json config{{"source", source},
                {"random_n", a.random_n},
                {"steps", a.steps},
                {"tau_max", opts.truth_tau_max},
                {"hide_env", a.hide_env}};
    json outputs{{"panel", panel_path.string()},
                 {"truth", truth_path.string()},
                 {"spec", spec_path.string()}};
    write_text(dir / "manifest.json",
               manifest("simulate", argv, config, {a.seed}, json{{"spec", source}}, outputs,
                        elapsed(start))
                       .dump(2) +
                   "\n");
    status() << "wrote " << generated.panel.steps() << "x" << generated.panel.variables()
              << " panel and " << generated.truth.edge_count() << "-edge truth to " << dir.string()
              << "\n";
    return kOk;
}

fs::path sibling(const fs::path& base, const std::string& suffix) {
    auto stem = base.filename().string();
    if (stem.ends_with(".json")) stem.resize(stem.size() - 5);
    return base.parent_path() / (stem + suffix);
}

int discover_cmd(const DiscoverArgs& a, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    const auto panel = read_panel_csv(a.panel_path);
    const fs::path out(a.out_path);
    ensure_dir(out.parent_path());
    const fs::path scores_path = a.scores_path.empty() ? sibling(out, ".scores.json") : fs::path(a.scores_path);
    ensure_dir(scores_path.parent_path());

    omp_set_num_threads(a.jobs);
    HceConfig cfg;
    cfg.tau_max = a.tau_max;
    cfg.alpha = a.alpha;
    cfg.beta = a.beta;
    cfg.estimator.k = a.k;
    cfg.estimator.jitter_scale = a.jitter;
    cfg.seed = a.seed;
    cfg.parallel = a.jobs > 1;

    json config{{"method", a.method}, {"tau_max", a.tau_max}, {"jobs", a.jobs}};
    json notes = json::array();
    Ucn network(panel.variables(), a.tau_max, panel.names());
    ScoreTensor scores;
    if (a.method == "hce") {
        config["alpha"] = a.alpha;
        config["beta"] = a.beta;
        config["k"] = a.k;
        config["jitter_scale"] = a.jitter;
        network = discover(panel, cfg);
        scores = ScoreTensor::from_network(network);
    } else {
        auto gc = granger_scores(standardize(panel), a.tau_max);
        scores = gc.scores;
        for (auto& note : gc.notes) notes.push_back(note);
        for (std::size_t j = 0; j < scores.n; ++j) {
            for (std::size_t i = 0; i < scores.n; ++i) {
                for (int s = 1; s <= scores.tau_max; ++s) {
                    if (scores.at(j, i, s) > 0.0) network.set_weight(j, i, s, scores.at(j, i, s));
                }
            }
        }
    }
    config["notes"] = notes;

    write_text(out, network_to_json(network));
    write_text(scores_path, scores_to_json(scores));
    write_text(sibling(out, ".manifest.json"),
               manifest("discover", argv, config, {a.seed}, json{{"panel", a.panel_path}},
                        json{{"network", out.string()}, {"scores", scores_path.string()}},
                        elapsed(start))
                       .dump(2) +
                   "\n");
    status() << "discovered " << network.edge_count() << " edges over "
              << panel.variables() << " variables\n";
    return kOk;
}

int evaluate_cmd(const EvaluateArgs& a, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t runs = a.truth.size();
    if (runs == 0) throw ConfigError("--truth is required");
    if (a.predicted.empty() && a.scores.empty()) {
        throw ConfigError("give --predicted and/or --scores");
    }
    if ((!a.predicted.empty() && a.predicted.size() != runs) ||
        (!a.scores.empty() && a.scores.size() != runs)) {
        throw ConfigError("--predicted/--scores must be given once per --truth");
    }

    std::vector<double> tprs, fprs, aucs;
    json rows = json::array();
    RocCurve last_curve;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto truth = read_network(a.truth[r]);
        std::optional<ScoreTensor> scores;
        if (!a.scores.empty()) scores = read_scores(a.scores[r]);
        Ucn predicted(truth.n(), truth.tau_max(), truth.names());
        if (!a.predicted.empty()) {
            predicted = read_network(a.predicted[r]);
        } else {
            // A bare score tensor predicts every cell with a positive score.
            if (scores->n != truth.n() || scores->tau_max != truth.tau_max()) {
                throw ComparisonError("score tensor shape does not match the truth network");
            }
            for (std::size_t j = 0; j < truth.n(); ++j) {
                for (std::size_t i = 0; i < truth.n(); ++i) {
                    for (int s = 1; s <= truth.tau_max(); ++s) {
                        if (scores->at(j, i, s) > 0.0) predicted.set_weight(j, i, s, scores->at(j, i, s));
                    }
                }
            }
        }
        const auto c = confusion(predicted, truth, a.collapse_lags);
        tprs.push_back(c.tpr());
        fprs.push_back(c.fpr());
        json row{{"run", r}, {"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn},
                 {"tpr", c.tpr()}, {"fpr", c.fpr()}};
        if (a.roc) {
            const auto curve = roc(scores ? *scores : ScoreTensor::from_network(predicted), truth,
                                   a.thresholds);
            aucs.push_back(curve.auc);
            row["auc"] = curve.auc;
            if (curve.degenerate) {
                std::cerr << "warning: run " << r << " has constant scores; ROC is the diagonal\n";
            }
            last_curve = curve;
        }
        rows.push_back(std::move(row));
    }

    MetricsReport report;
    report.tpr = median(tprs);
    report.fpr = median(fprs);
    if (!aucs.empty()) report.auc = median(aucs);
    report.seeds = runs;

    auto metrics = json::parse(metrics_to_json(report));
    if (runs > 1) {
        metrics["summary"] = "median";
        metrics["per_seed"] = rows;
    }
    const std::string text = metrics.dump(2) + "\n";
    json outputs;
    if (a.out_path.empty()) {
        std::cout << text;
    } else {
        ensure_dir(fs::path(a.out_path).parent_path());
        write_text(a.out_path, text);
        outputs["metrics"] = a.out_path;
    }
    if (!a.rows_csv.empty()) {
        std::ostringstream csv;
        csv << "run,tp,fp,tn,fn,tpr,fpr,auc\n";
        for (const auto& row : rows) {
            csv << row["run"].get<std::size_t>() << ',' << row["tp"].get<std::size_t>() << ','
                << row["fp"].get<std::size_t>() << ',' << row["tn"].get<std::size_t>() << ','
                << row["fn"].get<std::size_t>() << ',' << row["tpr"].dump() << ','
                << row["fpr"].dump() << ',' << (row.contains("auc") ? row["auc"].dump() : "") << '\n';
        }
        write_text(a.rows_csv, csv.str());
        outputs["rows"] = a.rows_csv;
    }
    if (a.roc && !a.roc_csv.empty()) {
        if (runs > 1) throw ConfigError("--roc-csv needs a single run");
        std::ostringstream csv;
        csv << "fpr,tpr\n";
        for (const auto& p : last_curve.points) {
            csv << json(p.fpr).dump() << ',' << json(p.tpr).dump() << '\n';
        }
        write_text(a.roc_csv, csv.str());
        outputs["roc_curve"] = a.roc_csv;
    }
    if (!a.out_path.empty()) {
        write_text(sibling(fs::path(a.out_path), ".manifest.json"),
                   manifest("evaluate", argv,
                            json{{"roc", a.roc}, {"thresholds", a.thresholds},
                                 {"collapse_lags", a.collapse_lags}},
                            {}, json{{"predicted", a.predicted}, {"scores", a.scores}, {"truth", a.truth}},
                            outputs, elapsed(start))
                           .dump(2) +
                       "\n");
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Unique causal network discovery from multivariate time series", "ucn"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    quiet = false;
    app.add_flag("-q,--quiet", quiet, "Suppress progress messages")->envname("UCN_QUIET");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Generate a synthetic panel and its ground-truth network");
    s->add_option("--spec", sim.spec_path, "Structural spec JSON")->envname("UCN_SPEC");
    s->add_flag("--example", sim.example, "Use the built-in example network")->envname("UCN_EXAMPLE");
    s->add_option("--random", sim.random_n, "Random network with N variables")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
        ->envname("UCN_RANDOM");
    s->add_option("--steps,-T", sim.steps, "Series length")
        ->check(CLI::PositiveNumber)
        ->envname("UCN_STEPS");
    s->add_option("--seed", sim.seed, "Random seed")->envname("UCN_SEED");
    s->add_option("--tau-max", sim.tau_max, "Depth of the truth tensor")
        ->check(CLI::PositiveNumber)
        ->envname("UCN_TAU_MAX");
    s->add_flag("--hide-env", sim.hide_env, "Leave the environment driver out of the panel")
        ->envname("UCN_HIDE_ENV");
    s->add_option("--out-dir,-o", sim.out_dir, "Output directory")->required()->envname("UCN_OUT_DIR");

    DiscoverArgs disc;
    auto* d = app.add_subcommand("discover", "Recover the causal network of a CSV panel");
    d->add_option("panel", disc.panel_path, "Panel CSV")->required()->envname("UCN_PANEL");
    d->add_option("--method", disc.method, "hce or granger")
        ->check(CLI::IsMember({"hce", "granger"}))
        ->envname("UCN_METHOD");
    d->add_option("--tau-max", disc.tau_max, "Maximum lag")->check(CLI::Range(1, 64))->envname("UCN_TAU_MAX");
    d->add_option("--alpha", disc.alpha, "Forward threshold (nats)")
        ->check(CLI::NonNegativeNumber)
        ->envname("UCN_ALPHA");
    d->add_option("--beta", disc.beta, "Backward threshold (nats)")
        ->check(CLI::NonNegativeNumber)
        ->envname("UCN_BETA");
    d->add_option("--k", disc.k, "Neighbour count")->check(CLI::Range(1, 1000))->envname("UCN_K");
    d->add_option("--jitter", disc.jitter, "Tie-breaking jitter amplitude")
        ->check(CLI::NonNegativeNumber)
        ->envname("UCN_JITTER");
    d->add_option("--seed", disc.seed, "Random seed")->envname("UCN_SEED");
    d->add_option("--jobs,-j", disc.jobs, "Concurrent per-target searches")
        ->check(CLI::PositiveNumber)
        ->envname("UCN_JOBS");
    d->add_option("--out,-o", disc.out_path, "Network JSON")->required()->envname("UCN_OUT");
    d->add_option("--scores", disc.scores_path, "Score tensor JSON (default: <out>.scores.json)")
        ->envname("UCN_SCORES");

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score predicted networks against ground truth");
    e->add_option("--predicted", ev.predicted, "Predicted network JSON (repeat for batches)")
        ->envname("UCN_PREDICTED");
    e->add_option("--scores", ev.scores, "Score tensor JSON (repeat for batches)")->envname("UCN_SCORES");
    e->add_option("--truth", ev.truth, "Ground-truth network JSON (repeat for batches)")
        ->required()
        ->envname("UCN_TRUTH");
    e->add_flag("--roc", ev.roc, "Also compute the ROC curve and AUC")->envname("UCN_ROC");
    e->add_option("--thresholds", ev.thresholds, "Evenly spaced ROC cutoffs")
        ->check(CLI::PositiveNumber)
        ->envname("UCN_THRESHOLDS");
    e->add_flag("--collapse-lags", ev.collapse_lags, "Compare n x n adjacency instead of lag cells")
        ->envname("UCN_COLLAPSE_LAGS");
    e->add_option("--out,-o", ev.out_path, "Metrics JSON (default: stdout)")->envname("UCN_OUT");
    e->add_option("--roc-csv", ev.roc_csv, "ROC curve points CSV")->envname("UCN_ROC_CSV");
    e->add_option("--rows-csv", ev.rows_csv, "Per-run metrics CSV")->envname("UCN_ROWS_CSV");

    std::vector<std::string> argv{"ucn"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*s) return simulate(sim, argv);
        if (*d) return discover_cmd(disc, argv);
        return evaluate_cmd(ev, argv);
    } catch (const IoError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kUsageError;
    } catch (const ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kUsageError;
    } catch (const ConfigError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kUsageError;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kComputationError;
    }
}

}  // namespace ucn::cli
