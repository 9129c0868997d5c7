#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsysid/quantizer.hpp"
#include "qsysid/simulate.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// Normalized half-to-half quantile gap above which a chain is reported as
/// not converged. Reported only; the chain is never extended because of it.
inline constexpr double kQuantileGapThreshold = 0.3;

struct ChainConfig {
    Eigen::Index order = 50;     ///< n, number of impulse-response samples
    int iterations = 3000;       ///< M
    int burn_in = 1000;          ///< M0, draws 1..M0 are discarded
    std::optional<double> beta;  ///< fixed beta; estimated on beta_grid when absent
    std::vector<double> beta_grid;  ///< empty selects default_beta_grid()
    std::uint64_t seed = 0;
    bool store_traces = false;

    // Overrides used for reductions and experiments.
    std::optional<double> fixed_lambda;  ///< disables the lambda update
    std::optional<double> fixed_sigma2;  ///< disables the sigma2 update
    std::optional<ImpulseResponse> initial_g;
    std::optional<double> initial_sigma2;
    std::optional<double> iteration_time_cap_s;
};

/// Quartiles of retained draws on the first and second halves of the chain.
/// Columns are the 0.25, 0.5 and 0.75 quantiles, one row per coefficient.
struct QuantileReport {
    Matrix first_half;
    Matrix second_half;
    Vector normalized_gap;  ///< per coefficient, max |gap| / posterior std
    double max_normalized_gap = 0.0;
    bool flagged = false;
};

struct ChainResult {
    ImpulseResponse g_hat;
    std::optional<Matrix> g_draws;  ///< (M - M0) x n, when store_traces
    Vector lambda_trace;            ///< length M, when store_traces
    Vector sigma2_trace;            ///< length M, when store_traces
    double beta_used = 0.0;
    std::optional<QuantileReport> diagnostics;  ///< absent with fewer than 100 retained draws

    ImpulseResponse g_initial;
    double sigma2_initial = 0.0;
    double lambda_mean = 0.0;  ///< over retained iterations
    double sigma2_mean = 0.0;  ///< over retained iterations
};

/// Beta minimizing the marginal-likelihood objective with the quantized
/// output plugged in for z. sigma2 is fixed at the residual-variance estimate
/// on y and lambda is profiled over default_lambda_grid(y). Ties go to the
/// smaller beta.
double estimate_beta(const Vector& y, const Matrix& U, const std::vector<double>& beta_grid);

struct InitialValues {
    ImpulseResponse g;
    double sigma2;
};

/// Kernel estimate on y at fixed beta and the residual variance on y.
/// Throws InsufficientDataError when N <= n.
InitialValues initialize(const Vector& y, const Matrix& U, double beta);

/// Gibbs sampler over (z, lambda, sigma2, g) given y. Each iteration draws,
/// in order: z | g, sigma2, y; lambda | g; sigma2 | z, g (previous g);
/// g | z, lambda, sigma2. g_hat is the mean of draws M0+1..M.
ChainResult run_chain(const Dataset& data, const Quantizer& quantizer, const ChainConfig& config);

/// Half-versus-half quartile comparison of retained draws (rows are draws).
/// Throws InsufficientDataError with fewer than 100 draws.
QuantileReport diagnostics(const Matrix& g_draws);

/// Type-7 (linear interpolation) empirical quantile of unsorted values.
double quantile(std::vector<double> values, double p);

}  // namespace qsysid
