#include "qsysid/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qsysid/conditionals.hpp"
#include "qsysid/errors.hpp"
#include "qsysid/kernel.hpp"

namespace qsysid {

LsResult ls_estimate(const Vector& w, const Matrix& U) {
    if (U.rows() != w.size()) throw DomainError("ls_estimate: dimension mismatch");
    if (U.rows() < U.cols()) throw DomainError("ls_estimate: need N >= n");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(U);
    LsResult out;
    out.g = cod.solve(w);
    out.rank = cod.rank();
    out.rank_deficient = out.rank < U.cols();
    return out;
}

double empirical_noise_variance(const Vector& w, const Matrix& U) {
    if (U.rows() <= U.cols()) {
        std::ostringstream msg;
        msg << "empirical_noise_variance: need N > n, got N=" << U.rows() << " n=" << U.cols();
        throw InsufficientDataError(msg.str());
    }
    const Vector r = w - U * ls_estimate(w, U).g;
    return r.squaredNorm() / static_cast<double>(U.rows() - U.cols());
}

namespace {

void check_hyper(double lambda, double beta, double sigma2) {
    if (!(lambda > 0.0) || !(sigma2 > 0.0) || !(beta > 0.0 && beta < 1.0)) {
        std::ostringstream msg;
        msg << "marginal likelihood: invalid hyperparameters lambda=" << lambda << " beta=" << beta
            << " sigma2=" << sigma2;
        throw DomainError(msg.str());
    }
}

double objective_full(const Vector& w, const Matrix& U, double lambda, const KernelMatrix& k, double sigma2) {
    Matrix sigma = lambda * U * k.entries() * U.transpose();
    sigma.diagonal().array() += sigma2;
    const CholeskyFactor f = cholesky(sigma, false);
    return f.log_determinant() + f.half_solve(w).squaredNorm();
}

// Sigma = sigma2 I + B B^T with B = sqrt(lambda) U L:
//   log det Sigma  = N log sigma2 + log det(I + B^T B / sigma2)
//   w^T Sigma^-1 w = (w^T w - w^T B (sigma2 I + B^T B)^{-1} B^T w) / sigma2
double objective_reduced(const Vector& w, const Matrix& U, double lambda, const KernelMatrix& k, double sigma2) {
    const CholeskyFactor kf = kernel_factor(k);
    const Matrix B = std::sqrt(lambda) * (U * kf.lower.triangularView<Eigen::Lower>());
    Matrix inner = B.transpose() * B;
    inner.diagonal().array() += sigma2;
    const CholeskyFactor f = cholesky(inner, false);
    const double n = static_cast<double>(B.cols());
    const double N = static_cast<double>(B.rows());
    const double log_det = f.log_determinant() + (N - n) * std::log(sigma2);
    const double quad = (w.squaredNorm() - f.half_solve(B.transpose() * w).squaredNorm()) / sigma2;
    return log_det + quad;
}

}  // namespace

double marginal_likelihood_objective(const Vector& w, const Matrix& U, double lambda, double beta, double sigma2,
                                     ObjectiveRoute route) {
    if (U.rows() != w.size()) throw DomainError("marginal_likelihood_objective: dimension mismatch");
    check_hyper(lambda, beta, sigma2);
    const KernelMatrix k = build_kernel(beta, U.cols());
    if (route == ObjectiveRoute::automatic) {
        route = U.rows() <= kFullObjectiveMaxRows ? ObjectiveRoute::full : ObjectiveRoute::reduced;
    }
    try {
        return route == ObjectiveRoute::full ? objective_full(w, U, lambda, k, sigma2)
                                             : objective_reduced(w, U, lambda, k, sigma2);
    } catch (const FactorizationError& e) {
        std::ostringstream msg;
        msg << "marginal_likelihood_objective: lambda=" << lambda << " beta=" << beta << " sigma2=" << sigma2
            << ": " << e.what();
        throw FactorizationError(msg.str());
    }
}

MarginalLikelihoodObjective::MarginalLikelihoodObjective(Vector w, Matrix U, double sigma2)
    : w_(std::move(w)), U_(std::move(U)), sigma2_(sigma2) {
    if (U_.rows() != w_.size()) throw DomainError("MarginalLikelihoodObjective: dimension mismatch");
    if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
        throw DomainError("MarginalLikelihoodObjective: sigma2 must be positive");
    }
    UtU_ = U_.transpose() * U_;
    Utw_ = U_.transpose() * w_;
    ww_ = w_.squaredNorm();
}

const MarginalLikelihoodObjective::Spectrum& MarginalLikelihoodObjective::spectrum(double beta) {
    if (auto it = spectra_.find(beta); it != spectra_.end()) return it->second;
    const CholeskyFactor kf = kernel_factor(build_kernel(beta, U_.cols()));
    const Matrix L = kf.lower.triangularView<Eigen::Lower>();
    const Matrix A = L.transpose() * UtU_ * L;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
    if (eig.info() != Eigen::Success) throw FactorizationError("MarginalLikelihoodObjective: eigensolver failed");
    Spectrum s;
    s.eigenvalues = eig.eigenvalues().cwiseMax(0.0);
    s.projections = eig.eigenvectors().transpose() * (L.transpose() * Utw_);
    return spectra_.emplace(beta, std::move(s)).first->second;
}

double MarginalLikelihoodObjective::operator()(double lambda, double beta) {
    check_hyper(lambda, beta, sigma2_);
    const Spectrum& s = spectrum(beta);
    const double N = static_cast<double>(w_.size());
    double log_det = N * std::log(sigma2_);
    double explained = 0.0;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        const double d = lambda * s.eigenvalues[i];
        log_det += std::log1p(d / sigma2_);
        explained += lambda * s.projections[i] * s.projections[i] / (sigma2_ + d);
    }
    return log_det + (ww_ - explained) / sigma2_;
}

GridPoint minimize_on_grid(MarginalLikelihoodObjective& objective, std::vector<double> beta_grid,
                           std::vector<double> lambda_grid) {
    if (beta_grid.empty() || lambda_grid.empty()) throw DomainError("minimize_on_grid: empty grid");
    std::sort(beta_grid.begin(), beta_grid.end());
    std::sort(lambda_grid.begin(), lambda_grid.end());
    std::optional<GridPoint> best;
    for (double beta : beta_grid) {
        for (double lambda : lambda_grid) {
            double value;
            try {
                value = objective(lambda, beta);
            } catch (const Error&) {
                continue;
            }
            if (!std::isfinite(value)) continue;
            if (!best || value < best->value) best = GridPoint{lambda, beta, value};
        }
    }
    if (!best) throw EstimationError("minimize_on_grid: objective failed at every grid point");
    return *best;
}

std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 30; ++i) grid.push_back((30 + 2 * i) / 100.0);
    for (double b : {0.90, 0.92, 0.95, 0.98}) grid.push_back(b);
    return grid;
}

std::vector<double> default_lambda_grid(const Vector& w) {
    double scale = w.size() > 0 ? w.squaredNorm() / static_cast<double>(w.size()) : 0.0;
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(scale * std::pow(10.0, -4.0 + i / 3.0));
    return grid;
}

SsmlResult ssml_estimate(const Vector& w, const Matrix& U, std::vector<double> beta_grid,
                         std::vector<double> lambda_grid, const SsmlOptions& options) {
    if (U.rows() <= U.cols()) {
        std::ostringstream msg;
        msg << "ssml_estimate: need N > n, got N=" << U.rows() << " n=" << U.cols();
        throw InsufficientDataError(msg.str());
    }
    if (beta_grid.empty()) beta_grid = default_beta_grid();
    if (lambda_grid.empty()) lambda_grid = default_lambda_grid(w);

    SsmlResult out;
    out.sigma2_hat = options.sigma2 ? *options.sigma2 : empirical_noise_variance(w, U);
    if (!(out.sigma2_hat > 0.0)) {
        throw DegenerateError("ssml_estimate: residual variance is zero (data interpolated exactly)");
    }
    MarginalLikelihoodObjective objective(w, U, out.sigma2_hat);
    const GridPoint best = minimize_on_grid(objective, std::move(beta_grid), std::move(lambda_grid));
    out.lambda_hat = best.lambda;
    out.beta_hat = best.beta;
    out.objective = best.value;
    out.g_hat = compute_posterior_gains(U, out.lambda_hat, out.beta_hat, out.sigma2_hat).mean(w);
    return out;
}

}  // namespace qsysid
