#include "dapd/losses.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dapd/errors.hpp"

namespace dapd {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// softplus(u + t) - softplus(u) - sigmoid(u) t
double softplus_gap(double u, double t) {
  if (std::abs(t) < 1e-3) {
    const double s = sigmoid(u);
    const double d2 = s * (1.0 - s);
    const double d3 = d2 * (1.0 - 2.0 * s);
    const double d4 = d2 * (1.0 - 6.0 * s + 6.0 * s * s);
    return t * t * (d2 / 2.0 + t * (d3 / 6.0 + t * d4 / 24.0));
  }
  return softplus(u + t) - softplus(u) - sigmoid(u) * t;
}

}  // namespace

double Loss::bregman(const Vector& x, double fx, const Vector& grad, const Vector& step) const {
  return value(x + step) - fx - grad.dot(step);
}

void Loss::check_dim(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    std::ostringstream msg;
    msg << "point has dimension " << x.size() << ", loss expects " << dim();
    throw ParameterError(msg.str());
  }
}

QuadraticLoss::QuadraticLoss(Matrix a, Vector b, double lambda)
    : a_(std::move(a)), b_(std::move(b)), lambda_(lambda) {
  if (a_.rows() != b_.size()) throw ParameterError("quadratic loss: rows of A must match b");
  if (!(lambda_ >= 0.0)) throw ParameterError("ridge coefficient must be nonnegative");
}

double QuadraticLoss::value(const Vector& x) const {
  check_dim(x);
  return (a_ * x - b_).squaredNorm() + 0.5 * lambda_ * x.squaredNorm();
}

Vector QuadraticLoss::gradient(const Vector& x) const {
  check_dim(x);
  return 2.0 * a_.transpose() * (a_ * x - b_) + lambda_ * x;
}

Matrix QuadraticLoss::hessian(const Vector& x) const {
  check_dim(x);
  Matrix h = 2.0 * a_.transpose() * a_;
  h.diagonal().array() += lambda_;
  return h;
}

double QuadraticLoss::bregman(const Vector& x, double, const Vector&, const Vector& step) const {
  check_dim(x);
  check_dim(step);
  return (a_ * step).squaredNorm() + 0.5 * lambda_ * step.squaredNorm();
}

LogisticLoss::LogisticLoss(Matrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() != labels_.size())
    throw ParameterError("logistic loss: one label per sample row");
  if (features_.rows() == 0) throw ParameterError("logistic loss needs at least one sample");
  for (Eigen::Index j = 0; j < labels_.size(); ++j)
    if (labels_(j) != 1.0 && labels_(j) != -1.0)
      throw ParameterError("logistic labels must be -1 or +1");
}

double LogisticLoss::value(const Vector& x) const {
  check_dim(x);
  const Vector margins = labels_.cwiseProduct(features_ * x);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < margins.size(); ++j) sum += softplus(-margins(j));
  return sum / static_cast<double>(samples());
}

Vector LogisticLoss::gradient(const Vector& x) const {
  check_dim(x);
  const Vector margins = labels_.cwiseProduct(features_ * x);
  Vector weights(margins.size());
  for (Eigen::Index j = 0; j < margins.size(); ++j)
    weights(j) = -labels_(j) * sigmoid(-margins(j));
  return features_.transpose() * weights / static_cast<double>(samples());
}

Matrix LogisticLoss::hessian(const Vector& x) const {
  check_dim(x);
  const Vector margins = labels_.cwiseProduct(features_ * x);
  Vector curvature(margins.size());
  for (Eigen::Index j = 0; j < margins.size(); ++j) {
    const double s = sigmoid(margins(j));
    curvature(j) = s * (1.0 - s);
  }
  return features_.transpose() * curvature.asDiagonal() * features_ /
         static_cast<double>(samples());
}

double LogisticLoss::bregman(const Vector& x, double, const Vector&, const Vector& step) const {
  check_dim(x);
  check_dim(step);
  const Vector u = -labels_.cwiseProduct(features_ * x);
  const Vector t = -labels_.cwiseProduct(features_ * step);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) sum += softplus_gap(u(j), t(j));
  return sum / static_cast<double>(samples());
}

LossFamily::LossFamily(std::vector<std::shared_ptr<const Loss>> losses)
    : losses_(std::move(losses)) {
  if (losses_.empty()) throw ParameterError("loss family needs at least one agent");
  dim_ = losses_.front()->dim();
  for (const auto& l : losses_)
    if (!l || l->dim() != dim_) throw ParameterError("all agents must share the variable dimension");
}

bool LossFamily::all_quadratic() const {
  for (const auto& l : losses_)
    if (!dynamic_cast<const QuadraticLoss*>(l.get())) return false;
  return true;
}

Matrix LossFamily::stacked_gradient(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != size())
    throw ParameterError("stacked iterate must have one row per agent");
  Matrix g(x.rows(), x.cols());
  for (std::size_t i = 0; i < size(); ++i) g.row(i) = losses_[i]->gradient(x.row(i).transpose());
  return g;
}

double LossFamily::stacked_value(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != size())
    throw ParameterError("stacked iterate must have one row per agent");
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i) sum += losses_[i]->value(x.row(i).transpose());
  return sum;
}

double LossFamily::total_value(const Vector& x) const {
  double sum = 0.0;
  for (const auto& l : losses_) sum += l->value(x);
  return sum;
}

Vector LossFamily::total_gradient(const Vector& x) const {
  Vector g = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& l : losses_) g += l->gradient(x);
  return g;
}

Matrix LossFamily::total_hessian(const Vector& x) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix h = Matrix::Zero(d, d);
  for (const auto& l : losses_) h += l->hessian(x);
  return h;
}

LossFamily generate_quadratic(std::size_t m, std::size_t h, std::size_t n, double lambda,
                              std::uint64_t seed) {
  if (m == 0 || h == 0 || n == 0) throw ParameterError("m, h and n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::shared_ptr<const Loss>> losses;
  losses.reserve(m);
  const auto rows = static_cast<Eigen::Index>(h);
  const auto cols = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < m; ++i) {
    Matrix a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = normal(rng);
    Vector b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) b(r) = normal(rng);
    losses.push_back(std::make_shared<QuadraticLoss>(std::move(a), std::move(b), lambda));
  }
  return LossFamily(std::move(losses));
}

double max_agent_condition_number(const LossFamily& family) {
  double worst = 1.0;
  const Vector zero = Vector::Zero(static_cast<Eigen::Index>(family.dim()));
  for (std::size_t i = 0; i < family.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(family[i].hessian(zero), Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    const double hi = eig.eigenvalues()(eig.eigenvalues().size() - 1);
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, hi / lo);
  }
  return worst;
}

namespace {

Vector solve_normal_equations(const LossFamily& family) {
  const auto d = static_cast<Eigen::Index>(family.dim());
  Matrix lhs = Matrix::Zero(d, d);
  Vector rhs = Vector::Zero(d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& q = static_cast<const QuadraticLoss&>(family[i]);
    lhs += 2.0 * q.a().transpose() * q.a();
    lhs.diagonal().array() += q.lambda();
    rhs += 2.0 * q.a().transpose() * q.b();
  }
  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() == Eigen::Success) {
    Vector x = llt.solve(rhs);
    // Accept the Cholesky solution only when it is accurate; rank-deficient
    // systems fall through to the minimum-norm solve.
    if ((lhs * x - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm())) return x;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(lhs);
  cod.setThreshold(1e-12);
  return cod.solve(rhs);
}

Vector newton_solve(const LossFamily& family, double tol, int max_iterations) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(family.dim()));
  for (int it = 0; it < max_iterations; ++it) {
    const Vector g = family.total_gradient(x);
    if (g.norm() <= tol) return x;
    const Matrix h = family.total_hessian(x);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
    cod.setThreshold(1e-14);
    Vector step = -cod.solve(g);
    if (!(step.dot(g) < 0.0)) step = -g;
    // Armijo backtracking on the total loss.
    const double f0 = family.total_value(x);
    const double slope = step.dot(g);
    double t = 1.0;
    while (family.total_value(x + t * step) > f0 + 1e-4 * t * slope) {
      t *= 0.5;
      if (t < 1e-20) break;
    }
    if (t < 1e-20) {
      // Rounding floor reached; one more exact check decides success.
      if (g.norm() <= tol) return x;
      break;
    }
    x += t * step;
  }
  const double residual = family.total_gradient(x).norm();
  if (residual <= tol) return x;
  std::ostringstream msg;
  msg << "centralized solve stopped with gradient norm " << residual << " > " << tol;
  throw ConvergenceError(msg.str());
}

}  // namespace

Vector centralized_solve(const LossFamily& family, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (family.size() == 0) throw ParameterError("empty loss family");
  if (family.all_quadratic()) {
    Vector x = solve_normal_equations(family);
    // One Newton refinement step tightens the residual on ill-conditioned
    // systems.
    const Vector g = family.total_gradient(x);
    if (g.norm() > tol) {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(family.total_hessian(x));
      x -= cod.solve(g);
    }
    const double residual = family.total_gradient(x).norm();
    if (residual > tol) {
      std::ostringstream msg;
      msg << "normal equations solved with residual " << residual << " > " << tol;
      throw ConvergenceError(msg.str());
    }
    return x;
  }
  return newton_solve(family, tol, max_iterations);
}

}  // namespace dapd
