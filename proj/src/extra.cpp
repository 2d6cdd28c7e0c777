#include "dapd/extra.hpp"

#include <string>

#include "dapd/errors.hpp"

namespace dapd {

ExtraState make_extra_state(const Matrix& x0) {
  ExtraState s;
  s.x = x0;
  return s;
}

void extra_step(ExtraState& s, const GossipMatrix& gm, const LossFamily& family, double alpha,
                NeighborExchange& net) {
  if (!(alpha > 0.0)) throw ParameterError("EXTRA stepsize must be positive");
  Matrix wx = net.gossip(gm.mixing, s.x);
  Matrix grad = family.stacked_gradient(s.x);
  Matrix next;
  if (s.k == 0) {
    next = wx - alpha * grad;
  } else {
    next = s.x + wx - 0.5 * (s.x_prev + s.wx_prev) - alpha * (grad - s.grad_prev);
  }
  if (!(next.norm() <= kDivergenceNorm))
    throw DivergenceError("EXTRA diverged at iteration " + std::to_string(s.k));
  s.x_prev = std::move(s.x);
  s.wx_prev = std::move(wx);
  s.grad_prev = std::move(grad);
  s.x = std::move(next);
  ++s.k;
}

}  // namespace dapd
