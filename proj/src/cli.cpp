#include "qsysid/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsysid/baselines.hpp"
#include "qsysid/benchmark.hpp"
#include "qsysid/dataset_io.hpp"
#include "qsysid/errors.hpp"
#include "qsysid/gibbs.hpp"
#include "qsysid/simulate.hpp"

namespace qsysid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

// Writes to a sibling temporary file and renames it into place.
void write_atomically(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + path.string());
        f << content;
        f.flush();
        if (!f) throw IoError("write failed for " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config " + path);
    json cfg;
    try {
        f >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config " + path + ": top level must be an object");
    // A manifest written by this tool is itself a valid config.
    if (cfg.contains("command") && cfg.contains("config") && cfg["config"].is_object()) return cfg["config"];
    return cfg;
}

/// Fills `target` from cfg[key] unless the flag was given on the command line.
template <class T>
void from_config(T& target, const CLI::Option* opt, const json& cfg, const std::string& key) {
    if (opt->count() > 0 || !cfg.contains(key)) return;
    try {
        target = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

template <class T>
void from_config(std::optional<T>& target, const CLI::Option* opt, const json& cfg, const std::string& key) {
    if (opt->count() > 0 || !cfg.contains(key) || cfg.at(key).is_null()) return;
    try {
        target = cfg.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

// beta-grid may be given as "0.5,0.9" or, as manifests write it, a JSON array.
void grid_from_config(std::optional<std::string>& target, const CLI::Option* opt, const json& cfg) {
    if (opt->count() > 0 || !cfg.contains("beta-grid") || cfg.at("beta-grid").is_null()) return;
    const json& v = cfg.at("beta-grid");
    if (v.is_string()) {
        target = v.get<std::string>();
        return;
    }
    if (!v.is_array()) throw ConfigError("config field 'beta-grid' must be a string or an array");
    std::string text;
    for (const json& item : v) {
        if (!item.is_number()) throw ConfigError("config field 'beta-grid' must hold numbers");
        if (!text.empty()) text += ',';
        text += format_double(item.get<double>());
    }
    target = text;
}

Quantizer parse_quantizer(const std::optional<std::string>& text) {
    if (!text) throw ConfigError("missing required field 'quantizer'");
    try {
        return Quantizer::parse(*text);
    } catch (const Error& e) {
        throw ConfigError(std::string("field 'quantizer': ") + e.what());
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::istringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size() || !(v > 0.0 && v < 1.0)) {
            throw ConfigError("field 'beta-grid': '" + item + "' is not a number in (0, 1)");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("field 'beta-grid' is empty");
    return out;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

json manifest_header(const std::string& command, const std::string& started) {
    return {{"command", command}, {"tool", "qsysid"}, {"version", kVersion}, {"started", started}};
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config;
    std::string out;
    std::optional<std::string> quantizer;
    long long samples = 500;
    long long order = 50;
    double snr = 10.0;
    std::uint64_t seed = 0;
    int zero_pairs = 10;
    int pole_pairs = 10;
    double zero_mag_max = 0.95;
    double pole_mag_max = 0.93;
    bool no_latent = false;
    unsigned threads = 0;

    std::map<std::string, CLI::Option*> opts;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    a.opts["config"] = app.add_option("--config", a.config, "JSON config; flags override its fields");
    a.opts["out"] = app.add_option("--out", a.out, "output dataset CSV");
    a.opts["quantizer"] = app.add_option("--quantizer", a.quantizer, "binary:<C> | ceil | custom:<q..>:<p..>");
    a.opts["samples"] = app.add_option("--samples", a.samples, "N");
    a.opts["order"] = app.add_option("--order", a.order, "n");
    a.opts["snr"] = app.add_option("--snr", a.snr, "var(U g) / sigma^2");
    a.opts["seed"] = app.add_option("--seed", a.seed);
    a.opts["zero-pairs"] = app.add_option("--zero-pairs", a.zero_pairs);
    a.opts["pole-pairs"] = app.add_option("--pole-pairs", a.pole_pairs);
    a.opts["zero-mag-max"] = app.add_option("--zero-mag-max", a.zero_mag_max);
    a.opts["pole-mag-max"] = app.add_option("--pole-mag-max", a.pole_mag_max);
    a.opts["no-latent"] = app.add_flag("--no-latent", a.no_latent, "omit the z column");
    a.opts["threads"] = app.add_option("--threads", a.threads, "accepted for uniformity; unused");
}

int cmd_simulate(SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const std::string started = utc_now();
    const json cfg = a.config.empty() ? json::object() : load_config(a.config);
    from_config(a.out, a.opts["out"], cfg, "out");
    from_config(a.quantizer, a.opts["quantizer"], cfg, "quantizer");
    from_config(a.samples, a.opts["samples"], cfg, "samples");
    from_config(a.order, a.opts["order"], cfg, "order");
    from_config(a.snr, a.opts["snr"], cfg, "snr");
    from_config(a.seed, a.opts["seed"], cfg, "seed");
    from_config(a.zero_pairs, a.opts["zero-pairs"], cfg, "zero-pairs");
    from_config(a.pole_pairs, a.opts["pole-pairs"], cfg, "pole-pairs");
    from_config(a.zero_mag_max, a.opts["zero-mag-max"], cfg, "zero-mag-max");
    from_config(a.pole_mag_max, a.opts["pole-mag-max"], cfg, "pole-mag-max");
    from_config(a.no_latent, a.opts["no-latent"], cfg, "no-latent");

    require(!a.out.empty(), "missing required field 'out'");
    const Quantizer q = parse_quantizer(a.quantizer);
    if (q.warning()) err << "warning: " << *q.warning() << '\n';
    require(a.order >= 1, "field 'order' must be at least 1");
    require(a.samples >= a.order, "field 'samples' must be at least 'order'");
    require(a.snr > 0.0, "field 'snr' must be positive");
    require(a.zero_pairs >= 0 && a.pole_pairs >= 0, "pair counts must be nonnegative");
    require(a.pole_mag_max >= 0.0 && a.pole_mag_max < 1.0, "field 'pole-mag-max' must lie in [0, 1)");
    require(a.zero_mag_max >= 0.0, "field 'zero-mag-max' must be nonnegative");

    const Rng root(a.seed);
    Rng system_rng = root.substream(0);
    Rng input_rng = root.substream(1);
    Rng noise_rng = root.substream(2);
    RandomSystemOptions sys{a.zero_pairs, a.pole_pairs, a.zero_mag_max, a.pole_mag_max};
    const TransferFunction tf = random_system(system_rng, sys);
    ImpulseResponse g = impulse_response(tf, a.order);
    g /= g.norm();
    const Vector u = white_noise_input(a.samples, input_rng);
    const Dataset d = generate_dataset(g, u, a.snr, q, noise_rng);

    const fs::path data_path = a.out;
    fs::path g_path = data_path;
    g_path += ".g_true.csv";
    fs::path manifest_path = data_path;
    manifest_path += ".manifest.json";

    std::ostringstream data_csv, g_csv;
    write_dataset_csv(data_csv, d, !a.no_latent);
    write_impulse_response_csv(g_csv, g, "g");
    write_atomically(data_path, data_csv.str());
    write_atomically(g_path, g_csv.str());

    json m = manifest_header("simulate", started);
    m["config"] = {{"quantizer", q.to_string()}, {"samples", a.samples},        {"order", a.order},
                   {"snr", a.snr},               {"seed", a.seed},              {"zero-pairs", a.zero_pairs},
                   {"pole-pairs", a.pole_pairs}, {"zero-mag-max", a.zero_mag_max}, {"pole-mag-max", a.pole_mag_max},
                   {"no-latent", a.no_latent},   {"out", a.out}};
    m["seeds"] = {{"base", a.seed}};
    m["artifacts"] = {{"dataset", data_path.string()}, {"impulse_response", g_path.string()}};
    m["sigma2_true"] = *d.sigma2_true;
    m["finished"] = utc_now();
    write_atomically(manifest_path, m.dump(2) + "\n");
    out << "wrote " << data_path.string() << " (" << d.size() << " samples)\n";
    return kSuccess;
}

// ---------------------------------------------------------------- identify

struct IdentifyArgs {
    std::string config;
    std::string data;
    std::string out;
    std::optional<std::string> quantizer;
    long long order = 50;
    int iters = 3000;
    int burnin = 1000;
    std::optional<double> beta;
    std::optional<std::string> beta_grid;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    std::map<std::string, CLI::Option*> opts;
};

void add_identify(CLI::App& app, IdentifyArgs& a) {
    a.opts["config"] = app.add_option("--config", a.config, "JSON config; flags override its fields");
    a.opts["data"] = app.add_option("--data", a.data, "dataset CSV with columns t,u,y");
    a.opts["out"] = app.add_option("--out", a.out, "output CSV k,g_hat");
    a.opts["quantizer"] = app.add_option("--quantizer", a.quantizer, "binary:<C> | ceil | custom:<q..>:<p..>");
    a.opts["order"] = app.add_option("--order", a.order, "n");
    a.opts["iters"] = app.add_option("--iters", a.iters, "M");
    a.opts["burnin"] = app.add_option("--burnin", a.burnin, "M0");
    auto* beta = app.add_option("--beta", a.beta, "fixed beta, skips estimation");
    auto* grid = app.add_option("--beta-grid", a.beta_grid, "comma-separated beta candidates");
    beta->excludes(grid);
    a.opts["beta"] = beta;
    a.opts["beta-grid"] = grid;
    a.opts["seed"] = app.add_option("--seed", a.seed);
    a.opts["threads"] = app.add_option("--threads", a.threads, "accepted for uniformity; a chain is sequential");
}

json trace_summary(const Vector& trace, int burn_in) {
    std::vector<double> kept(trace.data() + burn_in, trace.data() + trace.size());
    double mean = 0.0;
    for (double v : kept) mean += v;
    mean /= static_cast<double>(kept.size());
    return {{"mean", mean}, {"q25", quantile(kept, 0.25)}, {"median", quantile(kept, 0.5)},
            {"q75", quantile(kept, 0.75)}};
}

json quantile_report_json(const QuantileReport& r) {
    json first = json::array(), second = json::array();
    for (Eigen::Index k = 0; k < r.first_half.rows(); ++k) {
        first.push_back({r.first_half(k, 0), r.first_half(k, 1), r.first_half(k, 2)});
        second.push_back({r.second_half(k, 0), r.second_half(k, 1), r.second_half(k, 2)});
    }
    return {{"max_normalized_gap", r.max_normalized_gap},
            {"threshold", kQuantileGapThreshold},
            {"flagged", r.flagged},
            {"first_half_quartiles", first},
            {"second_half_quartiles", second}};
}

int cmd_identify(IdentifyArgs& a, std::ostream& out, std::ostream& err) {
    const std::string started = utc_now();
    const json cfg = a.config.empty() ? json::object() : load_config(a.config);
    from_config(a.data, a.opts["data"], cfg, "data");
    from_config(a.out, a.opts["out"], cfg, "out");
    from_config(a.quantizer, a.opts["quantizer"], cfg, "quantizer");
    from_config(a.order, a.opts["order"], cfg, "order");
    from_config(a.iters, a.opts["iters"], cfg, "iters");
    from_config(a.burnin, a.opts["burnin"], cfg, "burnin");
    if (a.opts["beta-grid"]->count() == 0) from_config(a.beta, a.opts["beta"], cfg, "beta");
    if (a.opts["beta"]->count() == 0) grid_from_config(a.beta_grid, a.opts["beta-grid"], cfg);
    from_config(a.seed, a.opts["seed"], cfg, "seed");

    require(!a.data.empty(), "missing required field 'data'");
    require(!a.out.empty(), "missing required field 'out'");
    const Quantizer q = parse_quantizer(a.quantizer);
    if (q.warning()) err << "warning: " << *q.warning() << '\n';
    require(a.order >= 1, "field 'order' must be at least 1");
    require(a.iters >= 1 && a.burnin >= 0 && a.burnin < a.iters, "need 0 <= burnin < iters");
    if (a.beta) require(*a.beta > 0.0 && *a.beta < 1.0, "field 'beta' must lie in (0, 1)");

    ChainConfig chain;
    chain.order = a.order;
    chain.iterations = a.iters;
    chain.burn_in = a.burnin;
    chain.beta = a.beta;
    chain.beta_grid = a.beta_grid ? parse_grid(*a.beta_grid) : default_beta_grid();
    chain.seed = a.seed;
    chain.store_traces = true;

    std::ifstream f(a.data);
    if (!f) throw IoError("cannot read dataset " + a.data);
    Dataset d = read_dataset_csv(f);
    d.quantizer = q;

    std::vector<std::size_t> bad_rows;
    for (Eigen::Index t = 0; t < d.y.size(); ++t) {
        try {
            q.level_interval(d.y[t]);
        } catch (const InvalidLevelError&) {
            bad_rows.push_back(static_cast<std::size_t>(t) + 1);
        }
    }
    if (!bad_rows.empty()) {
        err << "error: " << bad_rows.size() << " y value(s) are not levels of quantizer " << q.to_string()
            << "; rows (t):";
        for (std::size_t i = 0; i < bad_rows.size() && i < 20; ++i) err << ' ' << bad_rows[i];
        if (bad_rows.size() > 20) err << " ...";
        err << '\n';
        return kLevelMismatch;
    }
    if (d.size() <= a.order) {
        err << "error: need more samples than impulse-response coefficients (N=" << d.size() << ", n=" << a.order
            << ")\n";
        return kDimensionError;
    }

    const ChainResult r = run_chain(d, q, chain);

    const fs::path out_path = a.out;
    fs::path manifest_path = out_path;
    manifest_path += ".manifest.json";
    std::ostringstream csv;
    write_impulse_response_csv(csv, r.g_hat, "g_hat");
    write_atomically(out_path, csv.str());

    json m = manifest_header("identify", started);
    json resolved = {{"data", a.data},       {"out", a.out},   {"quantizer", q.to_string()}, {"order", a.order},
                     {"iters", a.iters},     {"burnin", a.burnin}, {"seed", a.seed}};
    if (a.beta) {
        resolved["beta"] = *a.beta;
    } else {
        resolved["beta-grid"] = chain.beta_grid;
    }
    m["config"] = resolved;
    m["seeds"] = {{"chain", a.seed}};
    m["artifacts"] = {{"estimate", out_path.string()}};
    json diag = {{"beta_used", r.beta_used},
                 {"sigma2_initial", r.sigma2_initial},
                 {"lambda", trace_summary(r.lambda_trace, a.burnin)},
                 {"sigma2", trace_summary(r.sigma2_trace, a.burnin)}};
    if (r.diagnostics) diag["quantiles"] = quantile_report_json(*r.diagnostics);
    m["diagnostics"] = diag;
    m["finished"] = utc_now();
    write_atomically(manifest_path, m.dump(2) + "\n");

    if (r.diagnostics && r.diagnostics->flagged) {
        err << "warning: half-chain quartiles differ by " << r.diagnostics->max_normalized_gap
            << " posterior std; consider more iterations\n";
    }
    out << "wrote " << out_path.string() << " (beta=" << r.beta_used << ")\n";
    return kSuccess;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
    std::string config;
    std::string out;
    std::string quantizer = "binary:1";
    int runs = 100;
    long long samples = 500;
    long long order = 50;
    double snr = 10.0;
    std::uint64_t seed = 0;
    std::string estimators = "BQGS,SSML,LS,SSML_NQ,LS_NQ";
    int iters = 3000;
    int burnin = 1000;
    std::optional<std::string> beta_grid;
    unsigned threads = 0;
    bool timing = false;

    std::map<std::string, CLI::Option*> opts;
};

void add_benchmark(CLI::App& app, BenchmarkArgs& a) {
    a.opts["config"] = app.add_option("--config", a.config, "JSON config; flags override its fields");
    a.opts["out"] = app.add_option("--out", a.out, "output directory");
    a.opts["quantizer"] = app.add_option("--quantizer", a.quantizer, "binary:<C> | ceil | custom:<q..>:<p..>");
    a.opts["runs"] = app.add_option("--runs", a.runs);
    a.opts["samples"] = app.add_option("--samples", a.samples, "N");
    a.opts["order"] = app.add_option("--order", a.order, "n");
    a.opts["snr"] = app.add_option("--snr", a.snr);
    a.opts["seed"] = app.add_option("--seed", a.seed);
    a.opts["estimators"] = app.add_option("--estimators", a.estimators, "comma-separated subset");
    a.opts["iters"] = app.add_option("--iters", a.iters, "M");
    a.opts["burnin"] = app.add_option("--burnin", a.burnin, "M0");
    a.opts["beta-grid"] = app.add_option("--beta-grid", a.beta_grid);
    a.opts["threads"] = app.add_option("--threads", a.threads, "worker threads, 0 = all cores");
    a.opts["timing"] = app.add_flag("--timing", a.timing, "record wall times in results.csv");
}

int cmd_benchmark(BenchmarkArgs& a, std::ostream& out, std::ostream& err) {
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const json cfg = a.config.empty() ? json::object() : load_config(a.config);
    from_config(a.out, a.opts["out"], cfg, "out");
    from_config(a.quantizer, a.opts["quantizer"], cfg, "quantizer");
    from_config(a.runs, a.opts["runs"], cfg, "runs");
    from_config(a.samples, a.opts["samples"], cfg, "samples");
    from_config(a.order, a.opts["order"], cfg, "order");
    from_config(a.snr, a.opts["snr"], cfg, "snr");
    from_config(a.seed, a.opts["seed"], cfg, "seed");
    from_config(a.estimators, a.opts["estimators"], cfg, "estimators");
    from_config(a.iters, a.opts["iters"], cfg, "iters");
    from_config(a.burnin, a.opts["burnin"], cfg, "burnin");
    grid_from_config(a.beta_grid, a.opts["beta-grid"], cfg);
    from_config(a.threads, a.opts["threads"], cfg, "threads");
    from_config(a.timing, a.opts["timing"], cfg, "timing");

    require(!a.out.empty(), "missing required field 'out'");
    Protocol p;
    p.quantizer = parse_quantizer(a.quantizer);
    if (p.quantizer.warning()) err << "warning: " << *p.quantizer.warning() << '\n';
    require(a.runs >= 1, "field 'runs' must be at least 1");
    require(a.order >= 1, "field 'order' must be at least 1");
    require(a.samples > a.order, "field 'samples' must exceed 'order'");
    require(a.snr > 0.0, "field 'snr' must be positive");
    require(a.iters >= 1 && a.burnin >= 0 && a.burnin < a.iters, "need 0 <= burnin < iters");
    p.runs = a.runs;
    p.samples = a.samples;
    p.order = a.order;
    p.snr = a.snr;
    p.threads = a.threads;
    p.chain.iterations = a.iters;
    p.chain.burn_in = a.burnin;
    p.chain.beta_grid = a.beta_grid ? parse_grid(*a.beta_grid) : default_beta_grid();
    p.estimators.clear();
    {
        std::istringstream s(a.estimators);
        std::string item;
        while (std::getline(s, item, ',')) {
            try {
                p.estimators.push_back(parse_estimator(item));
            } catch (const Error& e) {
                throw ConfigError(std::string("field 'estimators': ") + e.what());
            }
        }
        require(!p.estimators.empty(), "field 'estimators' is empty");
    }

    const fs::path dir = a.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());

    const std::vector<RunRecord> records = run_monte_carlo(p, a.seed);

    std::ostringstream csv;
    write_results_csv(csv, records, p.estimators, a.timing);
    write_atomically(dir / "results.csv", csv.str());
    json summary = summary_json(records, p.estimators);
    write_atomically(dir / "summary.json", summary.dump(2) + "\n");

    std::string names;
    for (EstimatorId id : p.estimators) {
        if (!names.empty()) names += ',';
        names += to_string(id);
    }
    json m = manifest_header("benchmark", started);
    m["config"] = {{"out", a.out},     {"quantizer", p.quantizer.to_string()},
                   {"runs", a.runs},   {"samples", a.samples},
                   {"order", a.order}, {"snr", a.snr},
                   {"seed", a.seed},   {"estimators", names},
                   {"iters", a.iters}, {"burnin", a.burnin},
                   {"beta-grid", p.chain.beta_grid}, {"timing", a.timing}};
    json seeds = json::array();
    for (const RunRecord& r : records) seeds.push_back(r.seed);
    m["seeds"] = {{"base", a.seed}, {"runs", seeds}};
    m["artifacts"] = {{"results", (dir / "results.csv").string()}, {"summary", (dir / "summary.json").string()}};
    json errors = json::array();
    for (const RunRecord& r : records) {
        for (const auto& [id, what] : r.errors) {
            errors.push_back({{"run", r.run_index}, {"estimator", to_string(id)}, {"error", what}});
        }
    }
    m["errors"] = errors;
    m["threads"] = a.threads;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m["finished"] = utc_now();
    write_atomically(dir / "manifest.json", m.dump(2) + "\n");

    for (EstimatorId id : p.estimators) {
        const json& s = summary["estimators"][std::string(to_string(id))];
        out << std::left << std::setw(8) << to_string(id) << " median FIT ";
        if (s["median"].is_null()) {
            out << "n/a";
        } else {
            out << s["median"].get<double>();
        }
        out << "  (failures " << s["failures"].get<int>() << ")\n";
    }
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian identification of linear systems from quantized output data", "qsysid"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateArgs sim;
    IdentifyArgs ident;
    BenchmarkArgs bench;
    add_simulate(*app.add_subcommand("simulate", "generate a random system and a quantized dataset"), sim);
    add_identify(*app.add_subcommand("identify", "estimate an impulse response with the Gibbs sampler"), ident);
    add_benchmark(*app.add_subcommand("benchmark", "Monte Carlo comparison of estimators"), bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    try {
        if (app.got_subcommand("simulate")) return cmd_simulate(sim, out, err);
        if (app.got_subcommand("identify")) return cmd_identify(ident, out, err);
        return cmd_benchmark(bench, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const FormatError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const InvalidLevelError& e) {
        err << "error: " << e.what() << '\n';
        return kLevelMismatch;
    } catch (const InsufficientDataError& e) {
        err << "error: " << e.what() << '\n';
        return kDimensionError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace qsysid::cli
