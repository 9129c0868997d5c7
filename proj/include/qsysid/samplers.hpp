#pragma once

#include "qsysid/linalg.hpp"
#include "qsysid/rng.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// Draw from N(mu, sigma2) restricted to the open interval (lower, upper).
/// Either bound may be infinite.
///
/// Region-dependent rejection: plain normal rejection when the interval holds
/// at least 1e-2 of the mass, Robert's exponential-proposal rejection for
/// one-sided tail intervals, and uniform-proposal rejection for short
/// intervals. The returned value is strictly inside the interval.
double sample_truncated_normal(double mu, double sigma2, double lower, double upper, Rng& rng);

/// Gamma draw in the (shape, RATE) parameterization: density proportional to
/// x^(shape - 1) exp(-rate * x), mean shape / rate.
double sample_gamma(double shape, double rate, Rng& rng);

/// mean + L w with w ~ N(0, I), where L is the lower factor of the covariance.
Vector sample_mvn(const Vector& mean, const Matrix& cov_lower, Rng& rng);
Vector sample_mvn(const Vector& mean, const CholeskyFactor& cov_factor, Rng& rng);

}  // namespace qsysid
