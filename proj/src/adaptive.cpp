#include "dapd/adaptive.hpp"

#include <algorithm>

#include "dapd/backtracking.hpp"
#include "dapd/errors.hpp"

namespace dapd {

namespace {

bool congruent(long k, std::size_t residue, std::size_t modulus) {
  const auto d = static_cast<long>(modulus);
  return k % d == static_cast<long>(residue) % d;
}

Matrix scale_rows(const Matrix& x, std::span<const double> factor, bool invert) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    out.row(i) = invert ? (x.row(i) / factor[i]).eval() : (x.row(i) * factor[i]).eval();
  return out;
}

}  // namespace

AdaptiveState make_adaptive_state(const Matrix& x0, const AdaptiveOptions& options) {
  if (!(options.theta_init > 0.0)) throw ParameterError("initial stepsize must be positive");
  if (options.d_init == 0) throw ParameterError("initial diameter estimate must be >= 1");
  if (!(options.delta > 0.0 && options.delta <= 1.0)) throw ParameterError("delta must lie in (0, 1]");
  const auto m = static_cast<std::size_t>(x0.rows());
  AdaptiveState s;
  s.x = x0;
  s.y = Matrix::Zero(x0.rows(), x0.cols());
  s.theta.assign(m, options.theta_init);
  s.theta_tilde.assign(m, options.theta_init);
  s.pi.assign(m, options.theta_init);
  s.horizon.assign(m, options.d_init);
  s.safeguard_bit.assign(m, 1);
  s.x0 = s.x;
  s.y0 = s.y;
  s.theta_bar.assign(m, options.theta_init);
  s.doubled.assign(m, false);
  return s;
}

HalfStep gossip_half_step(const Matrix& x, const Matrix& y, const GossipMatrix& gm,
                          const LossFamily& family, NeighborExchange& net) {
  HalfStep h;
  h.x = net.gossip(gm.mixing, x);
  h.grad = family.stacked_gradient(h.x);
  h.y = net.gossip(gm.mixing, y + h.grad);
  return h;
}

void primal_dual_update(const HalfStep& half, const Matrix& x, std::span<const double> theta,
                        std::span<const double> pi, const GossipMatrix& gm,
                        NeighborExchange& net, Matrix& x_next, Matrix& y_next) {
  x_next = half.x - scale_rows(half.y, theta, false);
  const Matrix scaled = scale_rows(x, pi, true);
  const Matrix mixed = net.gossip(gm.mixing, scaled);
  y_next = half.y + (scaled - mixed) - half.grad;
}

void adaptive_step(AdaptiveState& s, const GossipMatrix& gm, const LossFamily& family,
                   const AdaptiveOptions& o, NeighborExchange& net) {
  const Graph& g = net.graph();
  const std::size_t m = g.size();
  const long k = s.k;
  const double gamma_prev = o.gamma(k - 1);

  // Boundedness safeguard, frozen growth once an agent leaves the ball.
  std::vector<double> growth(m, gamma_prev);
  if (o.safeguard.enabled) {
    if (k > 0) {
      std::vector<double> bits(s.safeguard_bit.begin(), s.safeguard_bit.end());
      net.scalar_round();
      const auto neighborhood_bits = local_min_consensus(bits, g);
      for (std::size_t i = 0; i < m; ++i) {
        const double primal = (s.x.row(i) - s.x0.row(i)).norm();
        const double dual = s.theta[i] * (s.y.row(i) - s.y0.row(i)).norm();
        s.safeguard_bit[i] =
            std::max(primal, dual) >= o.safeguard.radius ? 0 : static_cast<int>(neighborhood_bits[i]);
      }
    }
    for (std::size_t i = 0; i < m; ++i) growth[i] = s.safeguard_bit[i] ? gamma_prev : 1.0;
  }

  // Gossip of X and Y around the gradient evaluation.
  const HalfStep half = gossip_half_step(s.x, s.y, gm, family, net);

  // Primal stepsizes: local backtracking along -y_i^{k+1/2}, then one min-consensus hop.
  std::vector<double> theta_bar(m);
  long trials = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vector xi = half.x.row(i).transpose();
    const Vector gi = half.grad.row(i).transpose();
    const Vector dir = -half.y.row(i).transpose();
    const auto r = backtrack(s.theta[i], family[i], xi, family[i].value(xi), gi, dir, growth[i],
                             o.delta);
    theta_bar[i] = r.stepsize;
    trials += r.trials;
  }
  net.scalar_round();
  std::vector<double> theta = local_min_consensus(theta_bar, g);

  std::vector<double> theta_tilde(m);
  std::vector<double> pi(m);
  std::vector<std::size_t> horizon(m);
  std::vector<bool> doubled(m, false);

  if (o.force_uniform) {
    const double common = *std::min_element(theta_bar.begin(), theta_bar.end());
    std::fill(theta.begin(), theta.end(), common);
    std::fill(theta_tilde.begin(), theta_tilde.end(), common);
    std::fill(pi.begin(), pi.end(), common);
    horizon = s.horizon;
  } else {
    // Dual stepsizes: theta tilde restarts from the fresh primal stepsizes at
    // k = 1 mod d_i, otherwise it propagates the grown neighborhood minimum;
    // pi takes theta tilde at k = 0 mod d_i and grows in between.
    net.scalar_round();
    for (std::size_t i = 0; i < m; ++i) {
      const bool restart = congruent(k, 1, s.horizon[i]);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j : g.neighborhood(i))
        best = std::min(best, restart ? theta[j] : gamma_prev * s.theta_tilde[j]);
      theta_tilde[i] = best;
    }
    for (std::size_t i = 0; i < m; ++i)
      pi[i] = congruent(k, 0, s.horizon[i]) ? theta_tilde[i] : gamma_prev * s.pi[i];

    // Diameter estimate: double the horizon where the tracking has not reached consensus.
    net.scalar_round(2);
    const auto tilde_min = local_min_consensus(theta_tilde, g);
    for (std::size_t i = 0; i < m; ++i) {
      doubled[i] = congruent(k, 0, s.horizon[i]) && theta_tilde[i] != tilde_min[i];
      std::size_t best = 0;
      for (std::size_t j : g.neighborhood(i))
        best = std::max(best, s.horizon[j]);
      // A failed check doubles the agent's own estimate; the neighborhood
      // max then synchronizes. Doubling every neighbor's value instead lets
      // estimates still in transit compound along a line.
      horizon[i] = doubled[i] ? std::max(best, 2 * s.horizon[i]) : best;
    }
  }

  // Primal and dual updates.
  Matrix x_next;
  Matrix y_next;
  primal_dual_update(half, s.x, theta, pi, gm, net, x_next, y_next);
  if (!(x_next.norm() <= kDivergenceNorm))
    throw DivergenceError("adaptive method diverged at iteration " + std::to_string(k));

  s.x = std::move(x_next);
  s.y = std::move(y_next);
  s.theta = std::move(theta);
  s.theta_tilde = std::move(theta_tilde);
  s.pi = std::move(pi);
  s.horizon = std::move(horizon);
  s.theta_bar = std::move(theta_bar);
  s.doubled = std::move(doubled);
  s.backtrack_trials = trials;
  ++s.k;
}

}  // namespace dapd
