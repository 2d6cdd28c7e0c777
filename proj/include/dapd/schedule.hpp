#pragma once

namespace dapd {

/// Backtracking growth factors gamma^k >= 1.
///
/// The polynomial schedule is gamma^k = ((k + beta1) / (k + 1))^beta2; the
/// default (2, 1) gives (k + 2) / (k + 1). Negative k (the search that
/// precedes iteration 0) returns 1 for the polynomial schedule.
class GammaSchedule {
 public:
  GammaSchedule() = default;

  static GammaSchedule polynomial(double beta1, double beta2);
  static GammaSchedule constant(double gamma);

  double operator()(long k) const;

  bool is_constant() const noexcept { return constant_; }
  double beta1() const noexcept { return beta1_; }
  double beta2() const noexcept { return beta2_; }

 private:
  bool constant_ = false;
  double beta1_ = 2.0;
  double beta2_ = 1.0;
  double value_ = 1.0;
};

double gamma_schedule(long k, double beta1, double beta2);

}  // namespace dapd
