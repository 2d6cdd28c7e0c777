#include "dapd/schedule.hpp"

#include <cmath>

#include "dapd/errors.hpp"

namespace dapd {

GammaSchedule GammaSchedule::polynomial(double beta1, double beta2) {
  if (!(beta1 >= 1.0)) throw ParameterError("gamma schedule needs beta1 >= 1");
  if (!(beta2 > 0.0)) throw ParameterError("gamma schedule needs beta2 > 0");
  GammaSchedule s;
  s.beta1_ = beta1;
  s.beta2_ = beta2;
  return s;
}

GammaSchedule GammaSchedule::constant(double gamma) {
  if (!(gamma >= 1.0)) throw ParameterError("constant gamma must be >= 1");
  GammaSchedule s;
  s.constant_ = true;
  s.value_ = gamma;
  return s;
}

double GammaSchedule::operator()(long k) const {
  if (constant_) return value_;
  if (k < 0) return 1.0;
  const double kk = static_cast<double>(k);
  const double ratio = (kk + beta1_) / (kk + 1.0);
  return beta2_ == 1.0 ? ratio : std::pow(ratio, beta2_);
}

double gamma_schedule(long k, double beta1, double beta2) {
  return GammaSchedule::polynomial(beta1, beta2)(k);
}

}  // namespace dapd
