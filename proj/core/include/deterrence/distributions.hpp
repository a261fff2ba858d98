#pragma once

namespace deterrence {

// Gaussian payoff shock N(mean, std_dev^2).
class ShockDistribution {
 public:
  ShockDistribution() = default;
  ShockDistribution(double mean, double std_dev);

  double mean() const { return mean_; }
  double std_dev() const { return std_dev_; }

  double cdf(double x) const;
  double pdf(double x) const;
  // log cdf, accurate deep into the left tail where cdf underflows.
  double log_cdf(double x) const;
  // Throws DomainError unless 0 < p < 1.
  double quantile(double p) const;

  // cdf(hi) - cdf(lo), evaluated on the tail that avoids cancellation.
  double cdf_difference(double hi, double lo) const;

  bool operator==(const ShockDistribution&) const = default;

 private:
  double mean_ = 0.0;
  double std_dev_ = 1.0;
};

double standard_normal_cdf(double z);
double standard_normal_pdf(double z);
double standard_normal_log_cdf(double z);
double standard_normal_quantile(double p);

// Total accusation probability delta * Phi(cutoff) + (1 - delta) * alpha.
double mixed_report_prob(double cutoff, double delta, double alpha,
                         const ShockDistribution& dist);

}  // namespace deterrence
