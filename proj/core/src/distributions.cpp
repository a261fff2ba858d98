#include "deterrence/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "deterrence/errors.hpp"

namespace deterrence {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Below this z the Mills-ratio series is used for log Phi.
constexpr double kTailSwitch = -30.0;

}  // namespace

double standard_normal_cdf(double z) {
  if (std::isnan(z)) return z;
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi * kInvSqrt2);
}

double standard_normal_log_cdf(double z) {
  if (z > kTailSwitch) {
    if (z > 5.0) return std::log1p(-0.5 * std::erfc(z * kInvSqrt2));
    return std::log(standard_normal_cdf(z));
  }
  // Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...)
  double z2 = z * z;
  double inv = 1.0 / z2;
  double series = 1.0 - inv * (1.0 - 3.0 * inv * (1.0 - 5.0 * inv * (1.0 - 7.0 * inv)));
  return -0.5 * z2 - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log(series);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

ShockDistribution::ShockDistribution(double mean, double std_dev)
    : mean_(mean), std_dev_(std_dev) {
  if (!(std_dev > 0.0) || !std::isfinite(std_dev)) {
    throw DomainError("shock std_dev must be positive and finite");
  }
  if (!std::isfinite(mean)) throw DomainError("shock mean must be finite");
}

double ShockDistribution::cdf(double x) const {
  return standard_normal_cdf((x - mean_) / std_dev_);
}

double ShockDistribution::pdf(double x) const {
  return standard_normal_pdf((x - mean_) / std_dev_) / std_dev_;
}

double ShockDistribution::log_cdf(double x) const {
  return standard_normal_log_cdf((x - mean_) / std_dev_);
}

double ShockDistribution::cdf_difference(double hi, double lo) const {
  double zh = (hi - mean_) / std_dev_;
  double zl = (lo - mean_) / std_dev_;
  if (zl > 0.0) return standard_normal_cdf(-zl) - standard_normal_cdf(-zh);
  return standard_normal_cdf(zh) - standard_normal_cdf(zl);
}

double ShockDistribution::quantile(double p) const {
  return mean_ + std_dev_ * standard_normal_quantile(p);
}

double mixed_report_prob(double cutoff, double delta, double alpha,
                         const ShockDistribution& dist) {
  return delta * dist.cdf(cutoff) + (1.0 - delta) * alpha;
}

}  // namespace deterrence
