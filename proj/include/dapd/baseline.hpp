#pragma once

#include <vector>

#include "dapd/adaptive.hpp"

namespace dapd {

enum class ConsensusMode { global, local };

struct BaselineOptions {
  double delta = 1.0;
  double theta_init = 1.0;
  GammaSchedule gamma;
  ConsensusMode mode = ConsensusMode::global;
  /// Scalar rounds charged per simulated network-wide minimum (the graph
  /// diameter).
  std::size_t flood_rounds = 1;
};

/// Prior adaptive method: a single set of stepsizes Theta drives both the
/// primal step and the dual correction (I - W) Theta^{-1} X.
struct BaselineState {
  long k = 0;
  Matrix x;
  Matrix y;
  std::vector<double> theta;      // theta_i^{k-1}
  std::vector<double> theta_bar;  // last backtracked values
};

BaselineState make_baseline_state(const Matrix& x0, const BaselineOptions& options);

void baseline_adaptive_step(BaselineState& state, const GossipMatrix& gm,
                            const LossFamily& family, const BaselineOptions& options,
                            NeighborExchange& net);

}  // namespace dapd
