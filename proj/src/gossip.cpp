#include "dapd/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dapd/errors.hpp"

namespace dapd {

Matrix metropolis_weights(const Graph& g) {
  const auto m = static_cast<Eigen::Index>(g.size());
  Matrix w = Matrix::Zero(m, m);
  for (auto [i, j] : g.edges()) {
    const double wij = 1.0 / (1.0 + static_cast<double>(std::max(g.degree(i), g.degree(j))));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = 1.0 - off;
  }
  return w;
}

Matrix lazy_mixing(const Matrix& base, double c) {
  return (1.0 - c) * Matrix::Identity(base.rows(), base.cols()) + c * base;
}

GossipMatrix gossip_matrix(const Matrix& base, double c) {
  if (!(c > 0.0 && c <= 0.5)) throw ParameterError("mixing coefficient c must lie in (0, 1/2]");
  if (base.rows() != base.cols() || base.rows() == 0)
    throw ParameterError("gossip base must be a nonempty square matrix");
  return GossipMatrix{base, c, lazy_mixing(base, c)};
}

SpectralData spectral_data(const GossipMatrix& gm) {
  const auto m = gm.base.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gm.base);
  const Vector& lambda = eig.eigenvalues();  // ascending
  SpectralData out;
  out.lambda_min = lambda(0);
  out.lambda2 = m >= 2 ? lambda(m - 2) : lambda(0);

  // (I - base) shares eigenvectors with base, with eigenvalues 1 - lambda.
  Vector inv(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double mu = 1.0 - lambda(k);
    inv(k) = std::abs(mu) <= kPseudoinverseCutoff ? 0.0 : 1.0 / mu;
  }
  const Matrix& v = eig.eigenvectors();
  Matrix pinv = v * inv.asDiagonal() * v.transpose();
  out.merit = pinv / gm.c - Matrix::Identity(m, m);
  out.merit = 0.5 * (out.merit + out.merit.transpose()).eval();
  return out;
}

namespace {

double check_one(const Matrix& w, const Graph& g) {
  const auto m = w.rows();
  if (m != static_cast<Eigen::Index>(g.size()) || w.cols() != m)
    return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    worst = std::max(worst, std::abs(w.row(i).sum() - 1.0));
    if (!(w(i, i) > 0.0)) return std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < m; ++j) {
      worst = std::max(worst, std::abs(w(i, j) - w(j, i)));
      if (i == j) continue;
      const bool edge = g.has_edge(i, j);
      if (edge != (w(i, j) > 0.0)) return std::numeric_limits<double>::infinity();
      if (w(i, j) < 0.0) return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

}  // namespace

double gossip_invariant_violation(const GossipMatrix& gm, const Graph& g) {
  return std::max(check_one(gm.base, g), check_one(gm.mixing, g));
}

}  // namespace dapd
