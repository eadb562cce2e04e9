#pragma once

// Confidence intervals for the empirical variance and covariance of 2n real
// quadrature samples.
//
// Two families are provided. The beta family holds under collective attacks
// with no distributional assumption; it rests on the fact that the share of
// the squared norm of an isotropic 2n-vector falling into an n-dimensional
// subspace is Beta(n/2, n/2)-distributed. The Gaussian family assumes the
// samples are Gaussian and uses chi-square quantiles with 2n degrees of
// freedom.
//
// Callers pass the raw parameter-estimation failure probability; the split
// into per-event probabilities happens here.

namespace cvqkd {

/// Number of complex symbols n (2n real samples), n >= 2.
class SampleCount {
 public:
  explicit SampleCount(double n);
  [[nodiscard]] double value() const noexcept { return n_; }

 private:
  double n_;
};

enum class IntervalMethod { BetaCollective, GaussianAssumption };

const char* to_string(IntervalMethod method);
/// Accepts "beta" and "gaussian"; throws ConfigError otherwise.
IntervalMethod parse_interval_method(const char* name);

struct IntervalHalfWidths {
  double delta_var;
  double delta_cov;
  IntervalMethod method;
};

/// a'(eps, n) = 2 (1 - q) with q the eps-quantile of Beta(n/2, n/2).
double a_prime(double eps, SampleCount n);
/// b'(eps, n) = 2 q; a' + b' = 2.
double b_prime(double eps, SampleCount n);

double delta_var_beta(SampleCount n, double eps);
double delta_cov_beta(SampleCount n, double eps);
double delta_var_gauss(SampleCount n, double eps);
double delta_cov_gauss(SampleCount n, double eps);

IntervalHalfWidths half_widths(SampleCount n, double eps, IntervalMethod method);

/// Multiplier m with y <= m * y_hat except with probability eps_pe / 2.
double variance_bound_factor(SampleCount n, double eps_pe, IntervalMethod method);

/// Upper confidence bound on the true variance from y_hat.
double var_upper_bound(double y_hat, SampleCount n, double eps_pe, IntervalMethod method);

/// Lower confidence bound on the true covariance: z_hat - 2 delta_cov sqrt(x_hat y_hat).
/// Throws DomainError for nonpositive x_hat or y_hat. For the beta method
/// also checks the deviation condition below and throws NumericalError if it
/// fails.
double cov_lower_bound(double x_hat, double y_hat, double z_hat, SampleCount n, double eps_pe,
                       IntervalMethod method);

/// Same bound with the unoptimized weight: z_hat - delta_cov (x_hat + y_hat).
double cov_lower_bound_symmetric(double x_hat, double y_hat, double z_hat, SampleCount n,
                                 double eps_pe, IntervalMethod method);

/// Condition delta >= 4 c eps' / 9 for the beta covariance bound, per 2n
/// samples. `spread` is x_hat + y_hat for the symmetric bound and
/// 2 sqrt(x_hat y_hat) for the optimized one; eps is the per-quantity
/// probability (eps_pe / 2).
bool beta_deviation_condition(double z_hat, double spread, SampleCount n, double eps);

}  // namespace cvqkd
