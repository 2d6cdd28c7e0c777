#pragma once

#include <Eigen/Dense>

namespace dapd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Divergence guard shared by every algorithm.
inline constexpr double kDivergenceNorm = 1e12;

}  // namespace dapd
