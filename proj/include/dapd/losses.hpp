#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dapd/types.hpp"

namespace dapd {

/// A smooth convex loss held by one agent.
class Loss {
 public:
  virtual ~Loss() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;

  /// f(x + step) - f(x) - <grad, step> given fx = f(x) and grad = grad f(x).
  /// Overrides avoid the cancellation of the plain difference for short steps.
  virtual double bregman(const Vector& x, double fx, const Vector& grad, const Vector& step) const;

 protected:
  void check_dim(const Vector& x) const;
};

/// f(x) = ||A x - b||^2 + (lambda / 2) ||x||^2
class QuadraticLoss final : public Loss {
 public:
  QuadraticLoss(Matrix a, Vector b, double lambda = 0.0);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.cols()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  double bregman(const Vector& x, double fx, const Vector& grad, const Vector& step) const override;

  const Matrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  double lambda() const noexcept { return lambda_; }

 private:
  Matrix a_;
  Vector b_;
  double lambda_;
};

/// f(x) = (1/h) sum_j log(1 + exp(-b_j <x, a_j>)), labels b_j in {-1, +1}.
class LogisticLoss final : public Loss {
 public:
  /// `features` is h x d, one sample per row.
  LogisticLoss(Matrix features, Vector labels);

  std::size_t dim() const override { return static_cast<std::size_t>(features_.cols()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  double bregman(const Vector& x, double fx, const Vector& grad, const Vector& step) const override;

  std::size_t samples() const noexcept { return static_cast<std::size_t>(features_.rows()); }
  const Matrix& features() const noexcept { return features_; }
  const Vector& labels() const noexcept { return labels_; }

 private:
  Matrix features_;
  Vector labels_;
};

/// One loss per agent, all over the same variable dimension. Copies share
/// the (immutable) losses.
class LossFamily {
 public:
  LossFamily() = default;
  explicit LossFamily(std::vector<std::shared_ptr<const Loss>> losses);

  std::size_t size() const noexcept { return losses_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const Loss& operator[](std::size_t i) const { return *losses_.at(i); }
  bool all_quadratic() const;

  /// Row i is grad f_i(x_i); no 1/m scaling.
  Matrix stacked_gradient(const Matrix& x) const;
  /// sum_i f_i(x_i)
  double stacked_value(const Matrix& x) const;

  /// sum_i f_i(x) at a common point.
  double total_value(const Vector& x) const;
  Vector total_gradient(const Vector& x) const;
  Matrix total_hessian(const Vector& x) const;

 private:
  std::vector<std::shared_ptr<const Loss>> losses_;
  std::size_t dim_ = 0;
};

/// A_i (h x n) and b_i with i.i.d. standard normal entries, one generator
/// stream for the whole family.
LossFamily generate_quadratic(std::size_t m, std::size_t h, std::size_t n, double lambda,
                              std::uint64_t seed);

/// Largest per-agent condition number of the quadratic Hessians
/// 2 A_i^T A_i + lambda I (inf if some agent is singular).
double max_agent_condition_number(const LossFamily& family);

/// Minimizer of sum_i f_i. Quadratics use a direct solve of the normal
/// equations (minimum-norm when singular); otherwise damped Newton with
/// backtracking. Post: ||sum_i grad f_i(x*)|| <= tol, else ConvergenceError.
Vector centralized_solve(const LossFamily& family, double tol, int max_iterations = 500);

}  // namespace dapd
