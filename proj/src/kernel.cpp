#include "qsysid/kernel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

#include "qsysid/errors.hpp"

namespace qsysid {

Matrix CholeskyFactor::solve(const Matrix& rhs) const {
    Matrix x = lower.triangularView<Eigen::Lower>().solve(rhs);
    lower.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

Vector CholeskyFactor::solve(const Vector& rhs) const {
    Vector x = lower.triangularView<Eigen::Lower>().solve(rhs);
    lower.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
}

Vector CholeskyFactor::half_solve(const Vector& v) const {
    return lower.triangularView<Eigen::Lower>().solve(v);
}

double CholeskyFactor::log_determinant() const {
    return 2.0 * lower.diagonal().array().log().sum();
}

namespace {

bool try_llt(const Matrix& a, Matrix& out) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) return false;
    out = llt.matrixL();
    // LLT reports success on some indefinite inputs; a non-positive or
    // non-finite pivot is a failure.
    const auto d = out.diagonal().array();
    return (d > 0.0).all() && d.isFinite().all();
}

double jitter_for(const Matrix& a) {
    return 1e-12 * a.trace() / static_cast<double>(a.rows());
}

}  // namespace

CholeskyFactor cholesky(const Matrix& a, bool allow_jitter) {
    CholeskyFactor f;
    if (try_llt(a, f.lower)) return f;
    if (!allow_jitter) throw FactorizationError("cholesky: matrix is not numerically positive definite");
    return cholesky_jittered(a);
}

CholeskyFactor cholesky_jittered(const Matrix& a) {
    CholeskyFactor f;
    f.jitter = jitter_for(a);
    Matrix shifted = a;
    shifted.diagonal().array() += f.jitter;
    if (!try_llt(shifted, f.lower)) {
        std::ostringstream msg;
        msg << "cholesky: factorization failed after jitter " << f.jitter;
        throw FactorizationError(msg.str());
    }
    return f;
}

KernelMatrix::KernelMatrix(double beta, Eigen::Index n) : beta_(beta), entries_(n, n) {
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            entries_(i, j) = std::pow(beta, static_cast<double>(std::max(i, j) + 1));
        }
    }
}

KernelMatrix build_kernel(double beta, Eigen::Index n) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream msg;
        msg << "build_kernel: beta must lie in (0, 1), got " << beta;
        throw DomainError(msg.str());
    }
    if (n < 1) throw DomainError("build_kernel: n must be at least 1");
    return KernelMatrix(beta, n);
}

CholeskyFactor kernel_factor(const KernelMatrix& k) {
    try {
        return cholesky(k.entries());
    } catch (const FactorizationError& e) {
        std::ostringstream msg;
        msg << "kernel_factor: beta=" << k.beta() << " n=" << k.size() << ": " << e.what();
        throw FactorizationError(msg.str());
    }
}

double quadratic_form(const Vector& g, const CholeskyFactor& factor) {
    if (g.size() != factor.size()) throw DomainError("quadratic_form: dimension mismatch");
    return factor.half_solve(g).squaredNorm();
}

double kernel_quadratic_form(const Vector& g, double beta) {
    if (!g.allFinite()) throw DomainError("kernel_quadratic_form: g must be finite");
    const KernelMatrix k = build_kernel(beta, g.size());
    return quadratic_form(g, kernel_factor(k));
}

}  // namespace qsysid
