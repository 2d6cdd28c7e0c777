#include "dapd/baseline.hpp"

#include <algorithm>

#include "dapd/backtracking.hpp"
#include "dapd/errors.hpp"

namespace dapd {

BaselineState make_baseline_state(const Matrix& x0, const BaselineOptions& options) {
  if (!(options.theta_init > 0.0)) throw ParameterError("initial stepsize must be positive");
  if (!(options.delta > 0.0 && options.delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  BaselineState s;
  s.x = x0;
  s.y = Matrix::Zero(x0.rows(), x0.cols());
  s.theta.assign(static_cast<std::size_t>(x0.rows()), options.theta_init);
  s.theta_bar = s.theta;
  return s;
}

void baseline_adaptive_step(BaselineState& s, const GossipMatrix& gm, const LossFamily& family,
                            const BaselineOptions& o, NeighborExchange& net) {
  const Graph& g = net.graph();
  const std::size_t m = g.size();
  const double gamma_prev = o.gamma(s.k - 1);

  const HalfStep half = gossip_half_step(s.x, s.y, gm, family, net);

  std::vector<double> theta_bar(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector xi = half.x.row(i).transpose();
    const Vector gi = half.grad.row(i).transpose();
    const Vector dir = -half.y.row(i).transpose();
    theta_bar[i] =
        backtrack(s.theta[i], family[i], xi, family[i].value(xi), gi, dir, gamma_prev, o.delta)
            .stepsize;
  }

  std::vector<double> theta;
  if (o.mode == ConsensusMode::global) {
    net.charge_flood(o.flood_rounds);
    theta.assign(m, *std::min_element(theta_bar.begin(), theta_bar.end()));
  } else {
    net.scalar_round();
    theta = local_min_consensus(theta_bar, g);
  }

  Matrix x_next = half.x;
  Matrix scaled(s.x.rows(), s.x.cols());
  for (std::size_t i = 0; i < m; ++i) {
    x_next.row(i) -= theta[i] * half.y.row(i);
    scaled.row(i) = s.x.row(i) / theta[i];
  }
  // (I - W) Theta^{-1} X^k costs one more gossip round.
  const Matrix correction = scaled - net.gossip(gm.mixing, scaled);
  Matrix y_next = half.y + correction - half.grad;
  if (!(x_next.norm() <= kDivergenceNorm))
    throw DivergenceError("baseline method diverged at iteration " + std::to_string(s.k));

  s.x = std::move(x_next);
  s.y = std::move(y_next);
  s.theta = std::move(theta);
  s.theta_bar = std::move(theta_bar);
  ++s.k;
}

}  // namespace dapd
