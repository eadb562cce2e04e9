#pragma once

// Regularized incomplete beta / gamma functions and their inverses.
//
// Every confidence interval in the library reduces to tail quantiles of a
// Beta(n/2, n/2) or a chi-square with 2n degrees of freedom, with n up to
// 1e9 and tail masses down to ~1e-24. The evaluation paths here are chosen
// to keep absolute error near 1e-14 in that regime: the power prefactors are
// computed in a Stirling-corrected form (no cancellation between huge
// log-gamma values) and the series / continued fractions are run to machine
// precision.

#include <cstdint>

namespace cvqkd {

/// Number of degrees of freedom of a chi-square variable, k >= 1.
class DegreesOfFreedom {
 public:
  explicit DegreesOfFreedom(double k);
  [[nodiscard]] double value() const noexcept { return k_; }

 private:
  double k_;
};

/// Both tails of a distribution function at one point. The smaller tail is
/// computed directly; the larger one is its complement.
struct TailPair {
  double lower;
  double upper;
};

/// I_x(a, b). Throws DomainError for x outside [0, 1] or a, b <= 0.
double reg_inc_beta(double x, double a, double b);

/// {I_x(a, b), 1 - I_x(a, b)} with each tail accurate in relative terms.
TailPair reg_inc_beta_tails(double x, double a, double b);

/// Inverse of I_x(a, b) in x. p == 0 and p == 1 map to the endpoints;
/// 0 < p < 1e-300 is rejected as a DomainError.
double inv_reg_inc_beta(double p, double a, double b);

/// Density of Beta(a, b) at x.
double beta_pdf(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
TailPair reg_inc_gamma_tails(double a, double x);

double chi2_cdf(double x, DegreesOfFreedom k);
/// Upper tail 1 - chi2_cdf, accurate when it is small.
double chi2_sf(double x, DegreesOfFreedom k);
double chi2_pdf(double x, DegreesOfFreedom k);

/// Quantile of the chi-square distribution; p must lie in (0, 1).
double chi2_invcdf(double p, DegreesOfFreedom k);

// Helpers.

/// Standard normal quantile (Wichura's AS241, ~1e-16 relative).
double normal_quantile(double p);
double normal_cdf(double x);

/// t - log(1 + t), accurate for small |t|.
double log1p_remainder(double t);

/// lgamma(x) - [(x - 1/2) log x - x + log(2 pi)/2], the Stirling remainder.
double stirling_remainder(double x);

}  // namespace cvqkd
