#pragma once

#include "dapd/exchange.hpp"
#include "dapd/gossip.hpp"
#include "dapd/losses.hpp"

namespace dapd {

/// EXTRA with a fixed stepsize alpha and W_bar = (I + W) / 2:
///   X^1     = W X^0 - alpha grad F(X^0)
///   X^{k+2} = (I + W) X^{k+1} - W_bar X^k - alpha (grad F(X^{k+1}) - grad F(X^k))
/// W X^k is cached, so each iteration costs one gossip round.
struct ExtraState {
  long k = 0;
  Matrix x;          // X^k
  Matrix x_prev;     // X^{k-1}
  Matrix wx_prev;    // W X^{k-1}
  Matrix grad_prev;  // grad F(X^{k-1})
};

ExtraState make_extra_state(const Matrix& x0);

void extra_step(ExtraState& state, const GossipMatrix& gm, const LossFamily& family, double alpha,
                NeighborExchange& net);

}  // namespace dapd
