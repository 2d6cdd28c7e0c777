#include "dapd/backtracking.hpp"

#include "dapd/errors.hpp"

namespace dapd {

BacktrackResult backtrack(double theta, const Loss& f, const Vector& x, const Vector& direction,
                          double gamma, double delta) {
  return backtrack(theta, f, x, f.value(x), f.gradient(x), direction, gamma, delta);
}

BacktrackResult backtrack(double theta, const Loss& f, const Vector& x, double fx,
                          const Vector& grad_x, const Vector& direction, double gamma,
                          double delta) {
  if (!(theta > 0.0)) throw ParameterError("backtracking needs theta > 0");
  if (!(gamma >= 1.0)) throw ParameterError("backtracking needs gamma >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("backtracking needs delta in (0, 1]");
  if (direction.size() != x.size()) throw ParameterError("direction and point differ in dimension");

  BacktrackResult r;
  r.stepsize = gamma * theta;
  r.trials = 1;
  r.point = x + r.stepsize * direction;
  for (;;) {
    const Vector step = r.point - x;
    // f(x+) <= f(x) + <grad, x+ - x> + delta/(2 theta+) ||x+ - x||^2, with
    // the left-over gap evaluated directly so that short steps near the
    // solution are not rejected by rounding. NaN keeps halving.
    const double gap = f.bregman(x, fx, grad_x, step);
    if (gap <= delta / (2.0 * r.stepsize) * step.squaredNorm()) break;
    r.stepsize *= 0.5;
    if (r.stepsize < kStepsizeFloor)
      throw ConvergenceError("backtracking stepsize underflow; loss is not smooth along the direction");
    r.point = x + r.stepsize * direction;
    ++r.trials;
  }
  return r;
}

}  // namespace dapd
