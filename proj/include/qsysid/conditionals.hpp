#pragma once

#include "qsysid/kernel.hpp"
#include "qsysid/linalg.hpp"
#include "qsysid/quantizer.hpp"
#include "qsysid/rng.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// Rates below this floor make a Gamma conditional improper.
inline constexpr double kGammaRateFloor = 1e-300;

/// Posterior of g given z:  g | z ~ N(C z, P) with
///   P = (U^T U / sigma2 + (lambda K_beta)^{-1})^{-1},   C = P U^T / sigma2.
struct PosteriorGains {
    Matrix P;
    Matrix C;
    CholeskyFactor P_factor;
    double lambda = 0.0;
    double beta = 0.0;
    double sigma2 = 0.0;

    /// C w.
    Vector mean(const Vector& w) const { return C * w; }
};

/// How P and C are evaluated.
///   precision   Cholesky of U^T U / sigma2 + (lambda K)^{-1} (n x n)
///   covariance  P = lambda K - lambda K U^T (U lambda K U^T + sigma2 I)^{-1} U lambda K (N x N)
///   automatic   precision when N >= n, covariance otherwise
enum class GainsRoute { automatic, precision, covariance };

/// Caches U^T U, U^T and the kernel inverse so gains can be recomputed
/// cheaply as (lambda, sigma2) change along a chain.
class GainsBuilder {
public:
    GainsBuilder(const Matrix& U, double beta, GainsRoute route = GainsRoute::automatic);

    /// Throws FactorizationError carrying (lambda, beta, sigma2) on failure.
    PosteriorGains compute(double lambda, double sigma2) const;

    double beta() const { return kernel_.beta(); }
    const KernelMatrix& kernel() const { return kernel_; }
    const CholeskyFactor& kernel_factor() const { return kernel_factor_; }
    const Matrix& regressor() const { return U_; }
    const Matrix& gram() const { return UtU_; }

private:
    PosteriorGains via_precision(double lambda, double sigma2) const;
    PosteriorGains via_covariance(double lambda, double sigma2) const;

    Matrix U_;
    Matrix Ut_;
    Matrix UtU_;
    KernelMatrix kernel_;
    CholeskyFactor kernel_factor_;
    Matrix kernel_inverse_;
    GainsRoute route_;
};

PosteriorGains compute_posterior_gains(const Matrix& U, double lambda, double beta, double sigma2,
                                       GainsRoute route = GainsRoute::automatic);

/// z_t ~ N(U_t g, sigma2) truncated to the interval of level y_t, drawn for
/// t = 1..N in order from `rng`. With the identity quantizer z = y.
/// Throws InvalidLevelError carrying t when y_t is not a level of `quantizer`.
Vector sample_z_conditional(const Vector& g, double sigma2, const Vector& y, const Matrix& U,
                            const Quantizer& quantizer, Rng& rng);

/// lambda with 1/lambda ~ Gamma(n/2, g^T K^{-1} g / 2) (shape, rate).
/// Throws DegenerateError when the rate falls below kGammaRateFloor.
double sample_lambda_conditional(const Vector& g, double beta, Rng& rng);
double sample_lambda_conditional(const Vector& g, const CholeskyFactor& kernel_factor, Rng& rng);

/// sigma2 with 1/sigma2 ~ Gamma(N/2, v^T v / 2), v = z - U g.
/// Throws DegenerateError when v^T v falls below kGammaRateFloor.
double sample_sigma2_conditional(const Vector& z, const Vector& g, const Matrix& U, Rng& rng);

/// g ~ N(C z, P).
Vector sample_g_conditional(const Vector& z, const PosteriorGains& gains, Rng& rng);

/// Current values of all sampled quantities.
struct GibbsState {
    Vector z;
    double lambda = 1.0;
    double sigma2 = 1.0;
    Vector g;
};

}  // namespace qsysid
