#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qsysid/types.hpp"

namespace qsysid {

struct LsResult {
    ImpulseResponse g;
    Eigen::Index rank = 0;
    bool rank_deficient = false;
};

/// Minimum-norm least-squares solution of U g = w by complete orthogonal
/// decomposition. Rank deficiency is reported, not thrown. Requires N >= n.
LsResult ls_estimate(const Vector& w, const Matrix& U);

/// Residual variance of the least-squares fit, |w - U g_LS|^2 / (N - n).
/// Throws InsufficientDataError when N <= n.
double empirical_noise_variance(const Vector& w, const Matrix& U);

/// Which factorization evaluates log det Sigma_w + w^T Sigma_w^{-1} w,
/// Sigma_w = lambda U K U^T + sigma2 I.
///   full       Cholesky of the N x N Sigma_w
///   reduced    matrix-inversion lemma on an n x n system
///   automatic  full when N <= kFullObjectiveMaxRows, reduced otherwise
enum class ObjectiveRoute { automatic, full, reduced };

inline constexpr Eigen::Index kFullObjectiveMaxRows = 1000;

/// Negative log marginal likelihood (up to constants and a factor 2):
/// log det Sigma_w + w^T Sigma_w^{-1} w. Throws FactorizationError.
double marginal_likelihood_objective(const Vector& w, const Matrix& U, double lambda, double beta, double sigma2,
                                     ObjectiveRoute route = ObjectiveRoute::automatic);

/// The same objective with (w, U, sigma2) fixed, evaluated over many
/// (lambda, beta) pairs. For each beta the whitened Gram matrix
/// L^T U^T U L (K = L L^T) is eigendecomposed once and cached, after which
/// each lambda costs O(n).
class MarginalLikelihoodObjective {
public:
    MarginalLikelihoodObjective(Vector w, Matrix U, double sigma2);

    double operator()(double lambda, double beta);

    double sigma2() const { return sigma2_; }
    std::size_t cached_betas() const { return spectra_.size(); }

private:
    struct Spectrum {
        Vector eigenvalues;
        Vector projections;  // V^T L^T U^T w
    };
    const Spectrum& spectrum(double beta);

    Vector w_;
    Matrix U_;
    Matrix UtU_;
    Vector Utw_;
    double ww_;
    double sigma2_;
    std::map<double, Spectrum> spectra_;
};

struct GridPoint {
    double lambda;
    double beta;
    double value;
};

/// Grid argmin of the objective over beta x lambda. Both grids are sorted
/// ascending; ties go to the smaller beta, then the smaller lambda. Points
/// whose evaluation throws or is non-finite are skipped; EstimationError if
/// none survive.
GridPoint minimize_on_grid(MarginalLikelihoodObjective& objective, std::vector<double> beta_grid,
                           std::vector<double> lambda_grid);

/// {0.30, 0.32, ..., 0.88} plus {0.90, 0.92, 0.95, 0.98}.
std::vector<double> default_beta_grid();

/// 25 log-spaced points on [1e-4, 1e4] * (w^T w / N).
std::vector<double> default_lambda_grid(const Vector& w);

struct SsmlOptions {
    /// Replaces the residual-variance estimate of sigma2 when set.
    std::optional<double> sigma2;
};

struct SsmlResult {
    ImpulseResponse g_hat;
    double lambda_hat = 0.0;
    double beta_hat = 0.0;
    double sigma2_hat = 0.0;
    double objective = 0.0;
};

/// Empirical-Bayes kernel estimate: sigma2 from the least-squares residual,
/// (lambda, beta) by grid minimization of the marginal-likelihood objective,
/// then g_hat = C w. Empty grids select the defaults.
SsmlResult ssml_estimate(const Vector& w, const Matrix& U, std::vector<double> beta_grid = {},
                         std::vector<double> lambda_grid = {}, const SsmlOptions& options = {});

}  // namespace qsysid
