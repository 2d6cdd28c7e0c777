#pragma once

#include "dapd/losses.hpp"

namespace dapd {

struct BacktrackResult {
  double stepsize = 0.0;  // accepted theta+ = gamma * theta / 2^(trials - 1)
  int trials = 0;         // number of sufficient-decrease checks, >= 1
  Vector point;           // x + stepsize * direction
};

/// Smallest accepted stepsize before the search is declared non-terminating.
inline constexpr double kStepsizeFloor = 1e-300;

/// Starts from gamma * theta and halves until
///   f(x+) <= f(x) + <grad f(x), x+ - x> + delta / (2 theta+) ||x+ - x||^2,
/// with x+ = x + theta+ * direction. Ties accept.
///
/// Requires theta > 0, gamma >= 1, delta in (0, 1]. Throws ConvergenceError
/// if theta+ drops below kStepsizeFloor.
BacktrackResult backtrack(double theta, const Loss& f, const Vector& x, const Vector& direction,
                          double gamma, double delta);

/// Same search with f(x) and grad f(x) supplied by the caller.
BacktrackResult backtrack(double theta, const Loss& f, const Vector& x, double fx,
                          const Vector& grad_x, const Vector& direction, double gamma,
                          double delta);

}  // namespace dapd
