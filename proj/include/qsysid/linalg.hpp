#pragma once

#include "qsysid/types.hpp"

namespace qsysid {

/// Lower Cholesky factor L with L * L^T = A + jitter * I.
struct CholeskyFactor {
    Matrix lower;
    double jitter = 0.0;

    Eigen::Index size() const { return lower.rows(); }

    /// Solves (L L^T) x = rhs.
    Matrix solve(const Matrix& rhs) const;
    Vector solve(const Vector& rhs) const;

    /// Returns L^{-1} v.
    Vector half_solve(const Vector& v) const;

    double log_determinant() const;
};

/// Cholesky of a symmetric positive-definite matrix. On failure retries once
/// with diagonal jitter 1e-12 * trace(A) / n; throws FactorizationError if
/// that also fails. When allow_jitter is false the first failure throws.
CholeskyFactor cholesky(const Matrix& a, bool allow_jitter = true);

/// Same as cholesky() but always adds the jitter. Used to check that the
/// jittered path does not move downstream quantities.
CholeskyFactor cholesky_jittered(const Matrix& a);

}  // namespace qsysid
