#include "qsysid/conditionals.hpp"

#include <cmath>
#include <sstream>

#include "qsysid/errors.hpp"
#include "qsysid/samplers.hpp"

namespace qsysid {

namespace {

std::string gains_context(double lambda, double beta, double sigma2) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "posterior gains: lambda=" << lambda << " beta=" << beta << " sigma2=" << sigma2;
    return msg.str();
}

void symmetrize(Matrix& m) {
    m = 0.5 * (m + m.transpose()).eval();
}

}  // namespace

GainsBuilder::GainsBuilder(const Matrix& U, double beta, GainsRoute route)
    : U_(U),
      Ut_(U.transpose()),
      UtU_(U.transpose() * U),
      kernel_(build_kernel(beta, U.cols())),
      kernel_factor_(qsysid::kernel_factor(kernel_)),
      route_(route) {
    if (route_ == GainsRoute::automatic) {
        route_ = U.rows() >= U.cols() ? GainsRoute::precision : GainsRoute::covariance;
    }
    if (route_ == GainsRoute::precision) {
        kernel_inverse_ = kernel_factor_.solve(Matrix(Matrix::Identity(U.cols(), U.cols())));
        symmetrize(kernel_inverse_);
    }
}

PosteriorGains GainsBuilder::compute(double lambda, double sigma2) const {
    if (!(lambda > 0.0) || !(sigma2 > 0.0) || !std::isfinite(lambda) || !std::isfinite(sigma2)) {
        throw DomainError(gains_context(lambda, beta(), sigma2) + ": lambda and sigma2 must be positive");
    }
    try {
        PosteriorGains gains =
            route_ == GainsRoute::precision ? via_precision(lambda, sigma2) : via_covariance(lambda, sigma2);
        gains.P_factor = cholesky(gains.P);
        gains.lambda = lambda;
        gains.beta = beta();
        gains.sigma2 = sigma2;
        return gains;
    } catch (const FactorizationError& e) {
        throw FactorizationError(gains_context(lambda, beta(), sigma2) + ": " + e.what());
    }
}

PosteriorGains GainsBuilder::via_precision(double lambda, double sigma2) const {
    Matrix precision = UtU_ / sigma2 + kernel_inverse_ / lambda;
    const CholeskyFactor f = cholesky(precision);
    PosteriorGains gains;
    gains.P = f.solve(Matrix(Matrix::Identity(precision.rows(), precision.cols())));
    symmetrize(gains.P);
    gains.C = gains.P * Ut_ / sigma2;
    return gains;
}

PosteriorGains GainsBuilder::via_covariance(double lambda, double sigma2) const {
    const Matrix prior = lambda * kernel_.entries();
    const Matrix prior_Ut = prior * Ut_;  // lambda K U^T, n x N
    Matrix S = U_ * prior_Ut;
    S.diagonal().array() += sigma2;
    const CholeskyFactor f = cholesky(S);
    PosteriorGains gains;
    // C = lambda K U^T S^{-1}; S is symmetric so C^T = S^{-1} U lambda K.
    gains.C = f.solve(Matrix(prior_Ut.transpose())).transpose();
    gains.P = prior - gains.C * prior_Ut.transpose();
    symmetrize(gains.P);
    return gains;
}

PosteriorGains compute_posterior_gains(const Matrix& U, double lambda, double beta, double sigma2,
                                       GainsRoute route) {
    return GainsBuilder(U, beta, route).compute(lambda, sigma2);
}

Vector sample_z_conditional(const Vector& g, double sigma2, const Vector& y, const Matrix& U,
                            const Quantizer& quantizer, Rng& rng) {
    if (U.rows() != y.size() || U.cols() != g.size()) throw DomainError("sample_z_conditional: dimension mismatch");
    const Vector mean = U * g;
    Vector z(y.size());
    for (Eigen::Index t = 0; t < y.size(); ++t) {
        LevelInterval iv;
        try {
            iv = quantizer.level_interval(y[t]);
        } catch (const InvalidLevelError& e) {
            std::ostringstream msg;
            msg << "sample_z_conditional: sample " << t + 1 << ": " << e.what();
            throw InvalidLevelError(msg.str(), static_cast<std::size_t>(t));
        }
        if (quantizer.kind() == Quantizer::Kind::identity) {
            z[t] = y[t];
        } else {
            z[t] = sample_truncated_normal(mean[t], sigma2, iv.lower, iv.upper, rng);
        }
    }
    return z;
}

double sample_lambda_conditional(const Vector& g, const CholeskyFactor& kernel_factor, Rng& rng) {
    const double q = quadratic_form(g, kernel_factor);
    if (!(q >= kGammaRateFloor)) {
        throw DegenerateError("sample_lambda_conditional: g^T K^{-1} g vanishes, lambda conditional is improper");
    }
    const double shape = 0.5 * static_cast<double>(g.size());
    return 1.0 / sample_gamma(shape, 0.5 * q, rng);
}

double sample_lambda_conditional(const Vector& g, double beta, Rng& rng) {
    if (!g.allFinite()) throw DomainError("sample_lambda_conditional: g must be finite");
    return sample_lambda_conditional(g, kernel_factor(build_kernel(beta, g.size())), rng);
}

double sample_sigma2_conditional(const Vector& z, const Vector& g, const Matrix& U, Rng& rng) {
    if (U.rows() != z.size() || U.cols() != g.size()) {
        throw DomainError("sample_sigma2_conditional: dimension mismatch");
    }
    const double vv = (z - U * g).squaredNorm();
    if (!(vv >= kGammaRateFloor)) {
        throw DegenerateError("sample_sigma2_conditional: residual vanishes, sigma2 conditional is improper");
    }
    const double shape = 0.5 * static_cast<double>(z.size());
    return 1.0 / sample_gamma(shape, 0.5 * vv, rng);
}

Vector sample_g_conditional(const Vector& z, const PosteriorGains& gains, Rng& rng) {
    if (gains.C.cols() != z.size()) throw DomainError("sample_g_conditional: dimension mismatch");
    return sample_mvn(gains.mean(z), gains.P_factor, rng);
}

}  // namespace qsysid
