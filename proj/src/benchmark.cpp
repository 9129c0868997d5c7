#include "qsysid/benchmark.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ostream>
#include <thread>

#include "qsysid/baselines.hpp"
#include "qsysid/dataset_io.hpp"
#include "qsysid/errors.hpp"

namespace qsysid {

std::string_view to_string(EstimatorId id) {
    switch (id) {
    case EstimatorId::BQGS: return "BQGS";
    case EstimatorId::SSML: return "SSML";
    case EstimatorId::LS: return "LS";
    case EstimatorId::SSML_NQ: return "SSML_NQ";
    case EstimatorId::LS_NQ: return "LS_NQ";
    }
    return "?";
}

EstimatorId parse_estimator(std::string_view text) {
    std::string s(text);
    for (char& c : s) {
        if (c == '-') c = '_';
    }
    for (EstimatorId id : kAllEstimators) {
        if (to_string(id) == s) return id;
    }
    throw DomainError("unknown estimator '" + std::string(text) + "'");
}

double fit_score(const ImpulseResponse& g_true, const ImpulseResponse& g_est) {
    if (g_true.size() != g_est.size()) throw DomainError("fit_score: length mismatch");
    const double denom = (g_true.array() - g_true.mean()).matrix().norm();
    if (!(denom > 0.0)) throw DegenerateError("fit_score: undefined for a constant impulse response");
    return 1.0 - (g_true - g_est).norm() / denom;
}

std::uint64_t run_seed(std::uint64_t base_seed, int run_index) {
    return hash_combine(base_seed, static_cast<std::uint64_t>(run_index));
}

namespace {

enum Substream : std::uint64_t { kSystem = 0, kInput = 1, kNoise = 2, kChain = 3 };

}  // namespace

RunRecord run_single(const Protocol& protocol, std::uint64_t base_seed, int run_index) {
    RunRecord rec;
    rec.run_index = run_index;
    rec.seed = run_seed(base_seed, run_index);

    const Rng root(rec.seed);
    Dataset data;
    try {
        Rng system_rng = root.substream(kSystem);
        Rng input_rng = root.substream(kInput);
        Rng noise_rng = root.substream(kNoise);
        ImpulseResponse g = impulse_response(random_system(system_rng, protocol.system), protocol.order);
        const double norm = g.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateError("random system has zero impulse response");
        g /= norm;
        const Vector u = white_noise_input(protocol.samples, input_rng);
        data = generate_dataset(g, u, protocol.snr, protocol.quantizer, noise_rng);
    } catch (const std::exception& e) {
        for (EstimatorId id : protocol.estimators) {
            rec.fit[id] = std::nullopt;
            rec.errors[id] = std::string("data generation: ") + e.what();
        }
        return rec;
    }

    const Matrix U = toeplitz_regressor(data.u, protocol.order);
    const ImpulseResponse& g_true = *data.g_true;
    const Vector& z = *data.z_true;

    for (EstimatorId id : protocol.estimators) {
        const auto start = std::chrono::steady_clock::now();
        try {
            ImpulseResponse g_est;
            switch (id) {
            case EstimatorId::BQGS: {
                ChainConfig cfg = protocol.chain;
                cfg.order = protocol.order;
                cfg.seed = hash_combine(rec.seed, kChain);
                const ChainResult chain = run_chain(data, protocol.quantizer, cfg);
                rec.beta_used = chain.beta_used;
                g_est = chain.g_hat;
                break;
            }
            case EstimatorId::SSML:
                g_est = ssml_estimate(data.y, U, protocol.chain.beta_grid).g_hat;
                break;
            case EstimatorId::LS:
                g_est = ls_estimate(data.y, U).g;
                break;
            case EstimatorId::SSML_NQ:
                g_est = ssml_estimate(z, U, protocol.chain.beta_grid).g_hat;
                break;
            case EstimatorId::LS_NQ:
                g_est = ls_estimate(z, U).g;
                break;
            }
            rec.fit[id] = fit_score(g_true, g_est);
        } catch (const std::exception& e) {
            rec.fit[id] = std::nullopt;
            rec.errors[id] = e.what();
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        rec.wall_times[id] = elapsed.count();
    }
    return rec;
}

std::vector<RunRecord> run_monte_carlo(const Protocol& protocol, std::uint64_t base_seed) {
    if (protocol.runs < 0) throw DomainError("run_monte_carlo: negative run count");
    std::vector<RunRecord> records(static_cast<std::size_t>(protocol.runs));
    unsigned threads = protocol.threads ? protocol.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max(1, protocol.runs));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < protocol.runs; i = next++) {
            records[static_cast<std::size_t>(i)] = run_single(protocol, base_seed, i);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return records;
}

Summary summarize(const std::vector<RunRecord>& records, EstimatorId estimator) {
    std::vector<double> fits;
    Summary s;
    for (const RunRecord& r : records) {
        const auto it = r.fit.find(estimator);
        if (it == r.fit.end()) continue;
        if (it->second) {
            fits.push_back(*it->second);
        } else {
            ++s.failures;
        }
    }
    if (fits.empty()) {
        throw InsufficientDataError("summarize: no successful runs for " + std::string(to_string(estimator)));
    }
    s.successes = static_cast<int>(fits.size());
    s.q25 = quantile(fits, 0.25);
    s.median = quantile(fits, 0.5);
    s.q75 = quantile(fits, 0.75);
    s.iqr = s.q75 - s.q25;
    return s;
}

void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       const std::vector<EstimatorId>& estimators, bool with_timing) {
    out << "run,seed,estimator,fit,wall_time_s,beta_used\n";
    for (const RunRecord& r : records) {
        for (EstimatorId id : estimators) {
            const auto fit = r.fit.find(id);
            if (fit == r.fit.end()) continue;
            out << r.run_index << ',' << r.seed << ',' << to_string(id) << ',';
            if (fit->second) out << format_double(*fit->second);
            out << ',';
            if (with_timing) {
                if (const auto wt = r.wall_times.find(id); wt != r.wall_times.end()) out << format_double(wt->second);
            }
            out << ',';
            if (r.beta_used) out << format_double(*r.beta_used);
            out << '\n';
        }
    }
}

nlohmann::json summary_json(const std::vector<RunRecord>& records, const std::vector<EstimatorId>& estimators) {
    nlohmann::json out = nlohmann::json::object();
    nlohmann::json& block = out["estimators"] = nlohmann::json::object();
    for (EstimatorId id : estimators) {
        const std::string name(to_string(id));
        try {
            const Summary s = summarize(records, id);
            block[name] = {{"q25", s.q25},           {"median", s.median},
                           {"q75", s.q75},           {"iqr", s.iqr},
                           {"successes", s.successes}, {"failures", s.failures}};
        } catch (const InsufficientDataError&) {
            int failures = 0;
            for (const RunRecord& r : records) {
                if (auto it = r.fit.find(id); it != r.fit.end() && !it->second) ++failures;
            }
            block[name] = {{"q25", nullptr}, {"median", nullptr}, {"q75", nullptr},
                           {"iqr", nullptr}, {"successes", 0},    {"failures", failures}};
        }
    }
    return out;
}

}  // namespace qsysid
