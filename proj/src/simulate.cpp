#include "qsysid/simulate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qsysid/errors.hpp"

namespace qsysid {

namespace {

std::vector<double> multiply(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    }
    return out;
}

// Product of (1 - 2 r cos(phi) q^-1 + r^2 q^-2) over random conjugate pairs.
std::vector<double> conjugate_pair_polynomial(int pairs, double mag_max, Rng& rng) {
    std::vector<double> poly{1.0};
    for (int k = 0; k < pairs; ++k) {
        const double r = mag_max * rng.uniform();
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        poly = multiply(poly, {1.0, -2.0 * r * std::cos(phi), r * r});
    }
    return poly;
}

}  // namespace

TransferFunction random_system(Rng& rng, const RandomSystemOptions& options) {
    if (!(options.pole_mag_max < 1.0) || options.pole_mag_max < 0.0 || options.zero_mag_max < 0.0) {
        throw DomainError("random_system: pole magnitude bound must lie in [0, 1)");
    }
    if (options.zero_pairs < 0 || options.pole_pairs < 0) throw DomainError("random_system: negative pair count");
    TransferFunction tf;
    const auto zeros = conjugate_pair_polynomial(options.zero_pairs, options.zero_mag_max, rng);
    tf.denominator = conjugate_pair_polynomial(options.pole_pairs, options.pole_mag_max, rng);
    tf.numerator = multiply(zeros, {0.0, 1.0});
    return tf;
}

ImpulseResponse impulse_response(const TransferFunction& tf, Eigen::Index n) {
    if (n < 1) throw DomainError("impulse_response: n must be at least 1");
    if (tf.denominator.empty() || tf.denominator.front() == 0.0) {
        throw DomainError("impulse_response: leading denominator coefficient must be nonzero");
    }
    const auto& b = tf.numerator;
    const auto& a = tf.denominator;
    // h[t] for t = 0..n; a_0 h_t = b_t - sum_{k>=1} a_k h_{t-k}
    std::vector<double> h(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t t = 0; t < h.size(); ++t) {
        double acc = t < b.size() ? b[t] : 0.0;
        for (std::size_t k = 1; k < a.size() && k <= t; ++k) acc -= a[k] * h[t - k];
        h[t] = acc / a[0];
    }
    ImpulseResponse g(n);
    for (Eigen::Index k = 0; k < n; ++k) g[k] = h[static_cast<std::size_t>(k) + 1];
    return g;
}

Matrix toeplitz_regressor(const Vector& u, Eigen::Index n) {
    if (u.size() < 1 || n < 1) throw DomainError("toeplitz_regressor: need N >= 1 and n >= 1");
    const Eigen::Index rows = u.size();
    Matrix U = Matrix::Zero(rows, n);
    // 0-based: row t holds u_t, u_{t-1}, ..., u_{t-n+1}.
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index t = k; t < rows; ++t) U(t, k) = u[t - k];
    }
    return U;
}

Vector white_noise_input(Eigen::Index length, Rng& rng) {
    Vector u(length);
    for (Eigen::Index t = 0; t < length; ++t) u[t] = rng.normal();
    return u;
}

double empirical_variance(const Vector& x) {
    if (x.size() == 0) return 0.0;
    const double mean = x.mean();
    return (x.array() - mean).square().sum() / static_cast<double>(x.size());
}

Dataset generate_dataset(const ImpulseResponse& g, const Vector& u, double snr, const Quantizer& quantizer,
                         Rng& rng) {
    if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("generate_dataset: snr must be positive");
    if (u.size() < g.size()) throw DomainError("generate_dataset: input shorter than impulse response");
    const Vector clean = toeplitz_regressor(u, g.size()) * g;
    const double signal_var = empirical_variance(clean);
    if (!(signal_var > 0.0)) throw DegenerateError("generate_dataset: noiseless output has zero variance");
    const double sigma2 = signal_var / snr;
    const double sigma = std::sqrt(sigma2);

    Dataset d;
    d.u = u;
    Vector z(clean.size());
    for (Eigen::Index t = 0; t < z.size(); ++t) z[t] = clean[t] + sigma * rng.normal();
    d.y.resize(z.size());
    for (Eigen::Index t = 0; t < z.size(); ++t) d.y[t] = quantizer.quantize(z[t]);
    d.z_true = std::move(z);
    d.g_true = g;
    d.sigma2_true = sigma2;
    d.quantizer = quantizer;
    return d;
}

}  // namespace qsysid
