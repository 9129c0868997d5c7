#include "qsysid/gibbs.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>

#include "qsysid/baselines.hpp"
#include "qsysid/conditionals.hpp"
#include "qsysid/errors.hpp"

namespace qsysid {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw DomainError("quantile: no values");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double estimate_beta(const Vector& y, const Matrix& U, const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) throw DomainError("estimate_beta: empty beta grid");
    for (double b : beta_grid) {
        if (!(b > 0.0 && b < 1.0)) throw DomainError("estimate_beta: grid values must lie in (0, 1)");
    }
    const double sigma2 = empirical_noise_variance(y, U);
    if (!(sigma2 > 0.0)) throw EstimationError("estimate_beta: residual variance of y is zero");
    MarginalLikelihoodObjective objective(y, U, sigma2);
    return minimize_on_grid(objective, beta_grid, default_lambda_grid(y)).beta;
}

InitialValues initialize(const Vector& y, const Matrix& U, double beta) {
    if (U.rows() <= U.cols()) {
        std::ostringstream msg;
        msg << "initialize: need N > n, got N=" << U.rows() << " n=" << U.cols();
        throw InsufficientDataError(msg.str());
    }
    const SsmlResult ssml = ssml_estimate(y, U, {beta});
    return {ssml.g_hat, ssml.sigma2_hat};
}

QuantileReport diagnostics(const Matrix& g_draws) {
    const Eigen::Index draws = g_draws.rows();
    if (draws < 100) {
        std::ostringstream msg;
        msg << "diagnostics: need at least 100 draws, got " << draws;
        throw InsufficientDataError(msg.str());
    }
    const Eigen::Index n = g_draws.cols();
    const Eigen::Index half = draws / 2;
    constexpr double probs[3] = {0.25, 0.5, 0.75};

    QuantileReport r;
    r.first_half.resize(n, 3);
    r.second_half.resize(n, 3);
    r.normalized_gap.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Vector col = g_draws.col(k);
        std::vector<double> a(col.data(), col.data() + half);
        std::vector<double> b(col.data() + (draws - half), col.data() + draws);
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(draws - 1));
        double gap = 0.0;
        for (int j = 0; j < 3; ++j) {
            r.first_half(k, j) = quantile(a, probs[j]);
            r.second_half(k, j) = quantile(b, probs[j]);
            gap = std::max(gap, std::abs(r.first_half(k, j) - r.second_half(k, j)));
        }
        if (sd > 0.0) {
            r.normalized_gap[k] = gap / sd;
        } else {
            r.normalized_gap[k] = gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
    }
    r.max_normalized_gap = n > 0 ? r.normalized_gap.maxCoeff() : 0.0;
    r.flagged = r.max_normalized_gap > kQuantileGapThreshold;
    return r;
}

namespace {

[[noreturn]] void rethrow_at_iteration(int iteration) {
    std::ostringstream prefix;
    prefix << "gibbs iteration " << iteration << ": ";
    const std::string p = prefix.str();
    try {
        throw;
    } catch (const InvalidLevelError& e) {
        throw InvalidLevelError(p + e.what(), e.index());
    } catch (const DegenerateError& e) {
        throw DegenerateError(p + e.what());
    } catch (const FactorizationError& e) {
        throw FactorizationError(p + e.what());
    } catch (const DomainError& e) {
        throw DomainError(p + e.what());
    }
}

void check_levels(const Vector& y, const Quantizer& quantizer) {
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        try {
            quantizer.level_interval(y[t]);
        } catch (const InvalidLevelError& e) {
            std::ostringstream msg;
            msg << "sample " << t + 1 << ": " << e.what();
            throw InvalidLevelError(msg.str(), static_cast<std::size_t>(t));
        }
    }
}

}  // namespace

ChainResult run_chain(const Dataset& data, const Quantizer& quantizer, const ChainConfig& config) {
    if (!(config.burn_in >= 0 && config.burn_in < config.iterations)) {
        throw DomainError("run_chain: need 0 <= burn_in < iterations");
    }
    if (data.u.size() != data.y.size()) throw DomainError("run_chain: u and y lengths differ");
    const Eigen::Index n = config.order;
    const Eigen::Index N = data.y.size();
    if (n < 1) throw DomainError("run_chain: order must be at least 1");
    if (N <= n) {
        std::ostringstream msg;
        msg << "run_chain: need N > n, got N=" << N << " n=" << n;
        throw InsufficientDataError(msg.str());
    }
    check_levels(data.y, quantizer);

    const Matrix U = toeplitz_regressor(data.u, n);
    const Vector& y = data.y;

    ChainResult result;
    if (config.beta) {
        result.beta_used = *config.beta;
    } else {
        result.beta_used = estimate_beta(y, U, config.beta_grid.empty() ? default_beta_grid() : config.beta_grid);
    }

    if (config.initial_g && config.initial_sigma2) {
        result.g_initial = *config.initial_g;
        result.sigma2_initial = *config.initial_sigma2;
    } else {
        InitialValues init = initialize(y, U, result.beta_used);
        result.g_initial = config.initial_g.value_or(init.g);
        result.sigma2_initial = config.initial_sigma2.value_or(init.sigma2);
    }
    if (result.g_initial.size() != n) throw DomainError("run_chain: initial g has wrong length");

    const GainsBuilder builder(U, result.beta_used);
    Rng rng(config.seed);

    GibbsState state;
    state.g = result.g_initial;
    state.sigma2 = config.fixed_sigma2.value_or(result.sigma2_initial);
    state.lambda = config.fixed_lambda.value_or(1.0);

    const int M = config.iterations;
    const int retained = M - config.burn_in;
    Matrix draws(retained, n);
    if (config.store_traces) {
        result.lambda_trace.resize(M);
        result.sigma2_trace.resize(M);
    }
    double lambda_sum = 0.0;
    double sigma2_sum = 0.0;

    using Clock = std::chrono::steady_clock;
    for (int i = 1; i <= M; ++i) {
        const auto start = Clock::now();
        try {
            state.z = sample_z_conditional(state.g, state.sigma2, y, U, quantizer, rng);
            if (!config.fixed_lambda) state.lambda = sample_lambda_conditional(state.g, builder.kernel_factor(), rng);
            if (!config.fixed_sigma2) state.sigma2 = sample_sigma2_conditional(state.z, state.g, U, rng);
            const PosteriorGains gains = builder.compute(state.lambda, state.sigma2);
            state.g = sample_g_conditional(state.z, gains, rng);
        } catch (const Error&) {
            rethrow_at_iteration(i);
        }
        if (config.iteration_time_cap_s) {
            const std::chrono::duration<double> elapsed = Clock::now() - start;
            if (elapsed.count() > *config.iteration_time_cap_s) {
                std::ostringstream msg;
                msg << "gibbs iteration " << i << " took " << elapsed.count() << " s, cap is "
                    << *config.iteration_time_cap_s << " s";
                throw BudgetError(msg.str());
            }
        }
        if (config.store_traces) {
            result.lambda_trace[i - 1] = state.lambda;
            result.sigma2_trace[i - 1] = state.sigma2;
        }
        if (i > config.burn_in) {
            draws.row(i - config.burn_in - 1) = state.g.transpose();
            lambda_sum += state.lambda;
            sigma2_sum += state.sigma2;
        }
    }

    result.g_hat = draws.colwise().mean().transpose();
    result.lambda_mean = lambda_sum / retained;
    result.sigma2_mean = sigma2_sum / retained;
    if (retained >= 100) result.diagnostics = diagnostics(draws);
    if (config.store_traces) result.g_draws = std::move(draws);
    return result;
}

}  // namespace qsysid
