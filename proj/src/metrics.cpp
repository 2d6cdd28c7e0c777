#include "dapd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dapd/errors.hpp"

namespace dapd {

FixedPoint fixed_point(const LossFamily& family, double tol) {
  FixedPoint fp;
  fp.x = centralized_solve(family, tol);
  const auto m = static_cast<Eigen::Index>(family.size());
  fp.X = Vector::Ones(m) * fp.x.transpose();
  fp.Y = -family.stacked_gradient(fp.X);
  fp.value = family.stacked_value(fp.X);
  return fp;
}

double merit_sc(const Matrix& x, const Matrix& y, double theta_min_prev, const FixedPoint& fp,
                const Matrix& merit_matrix) {
  Matrix dy = y - fp.Y;
  dy.rowwise() -= dy.colwise().mean();
  const double dual = (merit_matrix * dy).cwiseProduct(dy).sum();
  return (x - fp.X).squaredNorm() + theta_min_prev * theta_min_prev * dual;
}

double merit_cvx(const Matrix& x, const FixedPoint& fp, const LossFamily& family,
                 const GossipMatrix& gm, double delta) {
  const Matrix disagreement = x - gm.mixing * x;
  const double consensus = delta * (disagreement.cwiseProduct(x)).sum();
  const double gap = family.stacked_value(x) - fp.value + fp.Y.cwiseProduct(x).sum();
  return std::max(consensus, gap);
}

double relative_error(const Matrix& x, const Matrix& x0, const FixedPoint& fp) {
  const double base = (x0 - fp.X).norm();
  return base > 0.0 ? (x - fp.X).norm() / base : (x - fp.X).norm();
}

void ErgodicAverage::add(const Matrix& x) {
  ++count_;
  if (count_ == 1) {
    mean_ = x;
    return;
  }
  mean_ += (x - mean_) / static_cast<double>(count_);
}

const Matrix& ErgodicAverage::mean() const {
  if (count_ == 0) throw ParameterError("ergodic average of an empty sequence");
  return mean_;
}

Matrix ergodic_average(const Matrix& running_sum, long k) {
  if (k <= 0) throw ParameterError("ergodic average needs k >= 1");
  return running_sum / static_cast<double>(k);
}

double linear_rate_fit(std::span<const std::pair<long, double>> trace) {
  const std::size_t start = trace.size() / 2;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = start; r < trace.size(); ++r)
    if (trace[r].second > 0.0)
      pts.emplace_back(static_cast<double>(trace[r].first), std::log(trace[r].second));
  if (pts.size() < 10) throw ParameterError("rate fit needs at least 10 positive rows");
  double mk = 0.0, mv = 0.0;
  for (auto [k, v] : pts) {
    mk += k;
    mv += v;
  }
  mk /= static_cast<double>(pts.size());
  mv /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (auto [k, v] : pts) {
    sxy += (k - mk) * (v - mv);
    sxx += (k - mk) * (k - mk);
  }
  if (sxx == 0.0) throw ParameterError("rate fit needs distinct iteration indices");
  return sxy / sxx;
}

}  // namespace dapd
