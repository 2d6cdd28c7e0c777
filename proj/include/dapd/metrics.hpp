#pragma once

#include <span>
#include <utility>

#include "dapd/gossip.hpp"
#include "dapd/losses.hpp"

namespace dapd {

/// Consensual optimum X* = 1 x*^T with dual Y* = -grad F(X*).
struct FixedPoint {
  Vector x;
  Matrix X;
  Matrix Y;
  double value = 0.0;  // sum_i f_i(x*)
};

/// Throws ConvergenceError if the centralized oracle misses `tol`.
FixedPoint fixed_point(const LossFamily& family, double tol);

/// ||X - X*||^2 + theta_min_prev^2 ||P (Y - Y*)||_M^2 where P projects each
/// column onto the complement of the all-ones vector.
double merit_sc(const Matrix& x, const Matrix& y, double theta_min_prev, const FixedPoint& fp,
                const Matrix& merit_matrix);

/// max(delta <(I - W) X, X>, F(X) - F(X*) + <Y*, X>) with unscaled F.
double merit_cvx(const Matrix& x, const FixedPoint& fp, const LossFamily& family,
                 const GossipMatrix& gm, double delta);

/// ||X - X*|| / ||X0 - X*||
double relative_error(const Matrix& x, const Matrix& x0, const FixedPoint& fp);

/// Running mean of X^1..X^k, O(md) per update.
class ErgodicAverage {
 public:
  void add(const Matrix& x);
  long count() const noexcept { return count_; }
  /// Throws ParameterError before the first add.
  const Matrix& mean() const;

 private:
  Matrix mean_;
  long count_ = 0;
};

/// running_sum / k; k = 0 is an error.
Matrix ergodic_average(const Matrix& running_sum, long k);

/// Least-squares slope of log V against k over the last half of the trace.
/// Rows with V <= 0 are skipped; fewer than 10 usable rows throws.
double linear_rate_fit(std::span<const std::pair<long, double>> trace);

}  // namespace dapd
