#include "qsysid/samplers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/random/gamma_distribution.hpp>

#include "qsysid/errors.hpp"

namespace qsysid {

namespace {

constexpr double kNaiveMass = 1e-2;

// P(a < X < b) for X ~ N(0, 1), evaluated on the side that avoids cancellation.
double normal_mass(double a, double b) {
    const double r = 1.0 / std::sqrt(2.0);
    if (a >= 0.0) return 0.5 * (std::erfc(a * r) - std::erfc(b * r));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * r) - std::erfc(-a * r));
    return 1.0 - 0.5 * std::erfc(-a * r) - 0.5 * std::erfc(b * r);
}

double naive(double a, double b, Rng& rng) {
    while (true) {
        const double x = rng.normal();
        if (x > a && x < b) return x;
    }
}

// Uniform proposal on (a, b); `peak` is the point of the interval closest to 0.
double uniform_rejection(double a, double b, double peak, Rng& rng) {
    while (true) {
        const double x = a + (b - a) * rng.uniform();
        const double log_ratio = 0.5 * (peak * peak - x * x);
        if (std::log(rng.uniform()) <= log_ratio && x > a && x < b) return x;
    }
}

// Right tail, 0 <= a < b <= inf.
double tail(double a, double b, Rng& rng) {
    if (std::isfinite(b) && (b - a) * (b + a) <= 2.0) return uniform_rejection(a, b, a, rng);
    const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
    while (true) {
        const double x = a + rng.exponential(alpha);
        if (!(x < b) || !(x > a)) continue;
        const double d = x - alpha;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return x;
    }
}

double standard_truncated(double a, double b, Rng& rng) {
    if (std::isinf(a) && std::isinf(b)) return rng.normal();
    if (normal_mass(a, b) >= kNaiveMass) return naive(a, b, rng);
    if (a >= 0.0) return tail(a, b, rng);
    if (b <= 0.0) return -tail(-b, -a, rng);
    return uniform_rejection(a, b, 0.0, rng);
}

}  // namespace

double sample_truncated_normal(double mu, double sigma2, double lower, double upper, Rng& rng) {
    if (!std::isfinite(mu) || !std::isfinite(sigma2) || !(sigma2 > 0.0)) {
        std::ostringstream msg;
        msg << "sample_truncated_normal: need finite mu and sigma2 > 0, got mu=" << mu << " sigma2=" << sigma2;
        throw DomainError(msg.str());
    }
    if (std::isnan(lower) || std::isnan(upper)) throw DomainError("sample_truncated_normal: NaN bound");
    if (!(lower < upper)) {
        std::ostringstream msg;
        msg << "sample_truncated_normal: empty interval (" << lower << ", " << upper << ")";
        throw DegenerateError(msg.str());
    }
    const double s = std::sqrt(sigma2);
    const double a = (lower - mu) / s;
    const double b = (upper - mu) / s;
    while (true) {
        const double v = mu + s * standard_truncated(a, b, rng);
        // Rounding in the rescale can land on an endpoint.
        if (v > lower && v < upper) return v;
    }
}

double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        std::ostringstream msg;
        msg << "sample_gamma: need shape > 0 and rate > 0, got shape=" << shape << " rate=" << rate;
        throw DomainError(msg.str());
    }
    return boost::random::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

Vector sample_mvn(const Vector& mean, const Matrix& cov_lower, Rng& rng) {
    if (cov_lower.rows() != mean.size() || cov_lower.cols() != mean.size()) {
        throw DomainError("sample_mvn: factor is not conformal with the mean");
    }
    Vector w(mean.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
    return mean + cov_lower.triangularView<Eigen::Lower>() * w;
}

Vector sample_mvn(const Vector& mean, const CholeskyFactor& cov_factor, Rng& rng) {
    return sample_mvn(mean, cov_factor.lower, rng);
}

}  // namespace qsysid
