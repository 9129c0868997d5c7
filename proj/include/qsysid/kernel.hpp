#pragma once

#include "qsysid/linalg.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// First-order stable spline (TC) kernel.
///
/// With 1-based lags i, j the entries are beta^max(i, j). Storage is 0-based,
/// so stored entry (i, j) holds beta^(max(i, j) + 1). This is the only place
/// the index shift is made.
class KernelMatrix {
public:
    KernelMatrix(double beta, Eigen::Index n);

    double beta() const { return beta_; }
    Eigen::Index size() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    double beta_;
    Matrix entries_;
};

/// Throws DomainError unless 0 < beta < 1 and n >= 1.
KernelMatrix build_kernel(double beta, Eigen::Index n);

CholeskyFactor kernel_factor(const KernelMatrix& k);

/// g^T K_beta^{-1} g through two triangular solves with the Cholesky factor.
double kernel_quadratic_form(const Vector& g, double beta);

/// Quadratic form g^T (L L^T)^{-1} g for an existing factor.
double quadratic_form(const Vector& g, const CholeskyFactor& factor);

}  // namespace qsysid
