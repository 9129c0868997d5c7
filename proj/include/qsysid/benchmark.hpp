#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsysid/gibbs.hpp"
#include "qsysid/quantizer.hpp"
#include "qsysid/simulate.hpp"

namespace qsysid {

/// Estimators compared by the Monte Carlo protocol. The *_NQ variants read
/// the latent output z and serve as oracles.
enum class EstimatorId { BQGS, SSML, LS, SSML_NQ, LS_NQ };

inline constexpr EstimatorId kAllEstimators[] = {EstimatorId::BQGS, EstimatorId::SSML, EstimatorId::LS,
                                                 EstimatorId::SSML_NQ, EstimatorId::LS_NQ};

std::string_view to_string(EstimatorId id);
/// Accepts BQGS, SSML, LS, SSML_NQ, LS_NQ (also with '-' for '_').
EstimatorId parse_estimator(std::string_view text);

/// FIT = 1 - |g - g_est| / |g - mean(g)|. Throws DegenerateError when g_true
/// is constant.
double fit_score(const ImpulseResponse& g_true, const ImpulseResponse& g_est);

struct Protocol {
    int runs = 100;
    Eigen::Index samples = 500;
    Eigen::Index order = 50;
    double snr = 10.0;
    Quantizer quantizer = Quantizer::binary(1.0);
    ChainConfig chain;  ///< order and seed are overwritten per run
    std::vector<EstimatorId> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};
    RandomSystemOptions system;
    unsigned threads = 0;  ///< 0 selects hardware concurrency
};

struct RunRecord {
    int run_index = 0;
    std::uint64_t seed = 0;
    std::map<EstimatorId, std::optional<double>> fit;  ///< nullopt marks a failed estimator
    std::map<EstimatorId, std::string> errors;
    std::map<EstimatorId, double> wall_times;
    std::optional<double> beta_used;
};

/// Seed of run `run_index`, independent of scheduling.
std::uint64_t run_seed(std::uint64_t base_seed, int run_index);

/// One Monte Carlo run: random system, unit-norm impulse response, white
/// input, noisy quantized data, then every requested estimator.
RunRecord run_single(const Protocol& protocol, std::uint64_t base_seed, int run_index);

/// All runs, executed on a thread pool; the result is sorted by run index and
/// depends only on (protocol, base_seed).
std::vector<RunRecord> run_monte_carlo(const Protocol& protocol, std::uint64_t base_seed);

struct Summary {
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double iqr = 0.0;
    int successes = 0;
    int failures = 0;
};

/// Type-7 quartiles of the successful fits of `estimator`. Runs that did not
/// include the estimator are ignored. Throws InsufficientDataError when no
/// run succeeded.
Summary summarize(const std::vector<RunRecord>& records, EstimatorId estimator);

/// `run,seed,estimator,fit,wall_time_s,beta_used`, one row per run and
/// estimator. Failed fits and unrecorded values are empty fields. Wall times
/// are written only when with_timing is set.
void write_results_csv(std::ostream& out, const std::vector<RunRecord>& records,
                       const std::vector<EstimatorId>& estimators, bool with_timing);

/// {"estimators": {"BQGS": {"q25", "median", "q75", "iqr", "successes", "failures"}, ...}}
nlohmann::json summary_json(const std::vector<RunRecord>& records, const std::vector<EstimatorId>& estimators);

}  // namespace qsysid
