#pragma once

#include <Eigen/Core>

namespace qsysid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Impulse-response samples g_1..g_n; g_0 = 0 is implicit and never stored.
using ImpulseResponse = Eigen::VectorXd;

}  // namespace qsysid
