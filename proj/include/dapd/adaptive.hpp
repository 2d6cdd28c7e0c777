#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "dapd/exchange.hpp"
#include "dapd/gossip.hpp"
#include "dapd/losses.hpp"
#include "dapd/schedule.hpp"

namespace dapd {

struct SafeguardOptions {
  bool enabled = false;
  double radius = std::numeric_limits<double>::infinity();  // R tilde
};

struct AdaptiveOptions {
  double delta = 1.0;
  double theta_init = 1.0;   // theta^{-1}; also seeds theta tilde^{-1} and pi^{-1}
  std::size_t d_init = 1;    // d^0
  GammaSchedule gamma;
  SafeguardOptions safeguard;
  /// Test instrumentation: replace the local stepsize protocol by the
  /// network-wide minimum of the backtracked values, for both Theta and Pi.
  bool force_uniform = false;
};

/// Iterate k of the fully decentralized method. Stepsize vectors hold the
/// values from iteration k-1 (the inputs of the next step).
struct AdaptiveState {
  long k = 0;
  Matrix x;
  Matrix y;
  std::vector<double> theta;        // theta_i^{k-1}
  std::vector<double> theta_tilde;  // theta tilde_i^{k-1}
  std::vector<double> pi;           // pi_i^{k-1}
  std::vector<std::size_t> horizon; // d_i^k
  std::vector<int> safeguard_bit;   // h_i^{k-1}
  Matrix x0;
  Matrix y0;

  // What the last step did, for tests and traces.
  std::vector<double> theta_bar;    // backtracked values before min-consensus
  std::vector<bool> doubled;        // agent failed the horizon test
  long backtrack_trials = 0;
};

/// X^0 given, Y^0 = 0, all stepsizes at theta_init, all horizons at d_init,
/// safeguard bits at 1.
AdaptiveState make_adaptive_state(const Matrix& x0, const AdaptiveOptions& options);

/// One iteration: optional safeguard update, gossip of X and Y, local
/// backtracking plus min-consensus for Theta, tracking of the network
/// minimum into Pi, horizon doubling, and the primal/dual update.
///
/// Throws DivergenceError when ||X|| exceeds kDivergenceNorm and propagates
/// backtracking failures.
void adaptive_step(AdaptiveState& state, const GossipMatrix& gm, const LossFamily& family,
                   const AdaptiveOptions& options, NeighborExchange& net);

/// Result of the communication step shared by the adaptive method and the
/// baseline.
struct HalfStep {
  Matrix x;     // W X^k
  Matrix grad;  // grad F(X^{k+1/2})
  Matrix y;     // W (Y^k + grad)
};

HalfStep gossip_half_step(const Matrix& x, const Matrix& y, const GossipMatrix& gm,
                          const LossFamily& family, NeighborExchange& net);

/// Primal/dual update with per-agent primal stepsizes `theta` and dual
/// stepsizes `pi`:
///   X+ = X^{k+1/2} - Theta Y^{k+1/2}
///   Y+ = Y^{k+1/2} + Pi^{-1} X^k - W Pi^{-1} X^k - grad.
void primal_dual_update(const HalfStep& half, const Matrix& x, std::span<const double> theta,
                        std::span<const double> pi, const GossipMatrix& gm,
                        NeighborExchange& net, Matrix& x_next, Matrix& y_next);

}  // namespace dapd
