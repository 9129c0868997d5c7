#pragma once

#include <optional>
#include <vector>

#include "qsysid/quantizer.hpp"
#include "qsysid/rng.hpp"
#include "qsysid/types.hpp"

namespace qsysid {

/// Discrete-time rational transfer function B(q^-1) / A(q^-1).
/// numerator holds b_0..b_m, denominator a_0 = 1, a_1..a_p.
struct TransferFunction {
    std::vector<double> numerator;
    std::vector<double> denominator;
};

/// Observed (and, for synthetic data, latent) signals of one experiment.
/// Row t (1-based) pairs the input u_{t-1} with the measurement y_t.
struct Dataset {
    Vector u;
    Vector y;
    std::optional<Vector> z_true;
    std::optional<ImpulseResponse> g_true;
    std::optional<double> sigma2_true;
    Quantizer quantizer = Quantizer::identity();

    Eigen::Index size() const { return y.size(); }
};

struct RandomSystemOptions {
    int zero_pairs = 10;
    int pole_pairs = 10;
    double zero_mag_max = 0.95;
    double pole_mag_max = 0.93;
};

/// Random stable system built from conjugate zero and pole pairs with
/// magnitudes ~ U[0, max] and phases ~ U[0, 2 pi). The numerator is shifted by
/// one delay so the system is strictly causal (g_0 = 0).
TransferFunction random_system(Rng& rng, const RandomSystemOptions& options = {});

/// g_1..g_n of the transfer function, from its difference equation driven by
/// a unit pulse. The instantaneous term g_0 is not returned.
ImpulseResponse impulse_response(const TransferFunction& tf, Eigen::Index n);

/// N x n regression matrix with entry (t, k) = u_{t-k} (1-based t, k) and
/// u_j = 0 for j < 0, i.e. U g is the strictly causal convolution.
Matrix toeplitz_regressor(const Vector& u, Eigen::Index n);

/// Unit-variance white Gaussian input of length N.
Vector white_noise_input(Eigen::Index length, Rng& rng);

/// Population (1/N) variance.
double empirical_variance(const Vector& x);

/// z = U g + v with var(v) = empirical_variance(U g) / snr, y = Q[z].
Dataset generate_dataset(const ImpulseResponse& g, const Vector& u, double snr, const Quantizer& quantizer,
                         Rng& rng);

}  // namespace qsysid
