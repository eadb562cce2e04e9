#include "cvqkd/confidence.hpp"

#include <cmath>
#include <string>

#include "cvqkd/error.hpp"
#include "cvqkd/special_functions.hpp"

namespace cvqkd {
namespace {

void check_eps(const char* fn, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError(std::string(fn) + ": probability must lie in (0, 1), got " +
                      std::to_string(eps));
  }
}

double beta_quantile(double eps, SampleCount n) {
  const double half = 0.5 * n.value();
  return inv_reg_inc_beta(eps, half, half);
}

// (a' - b') for a given probability; equals 2 (1 - 2q).
double beta_spread(double eps, SampleCount n) {
  const double q = beta_quantile(eps, n);
  return 2.0 * (1.0 - 2.0 * q);
}

double chi2_fraction(double eps, SampleCount n) {
  const double dof = 2.0 * n.value();
  return chi2_invcdf(eps, DegreesOfFreedom(dof)) / dof;
}

void check_moments(const char* fn, double x_hat, double y_hat) {
  if (!(x_hat > 0.0) || !(y_hat > 0.0) || !std::isfinite(x_hat) || !std::isfinite(y_hat)) {
    throw DomainError(std::string(fn) + ": variances must be positive");
  }
}

}  // namespace

SampleCount::SampleCount(double n) : n_(n) {
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw DomainError("sample count must be at least 2, got " + std::to_string(n));
  }
}

const char* to_string(IntervalMethod method) {
  return method == IntervalMethod::BetaCollective ? "beta" : "gaussian";
}

IntervalMethod parse_interval_method(const char* name) {
  const std::string s(name);
  if (s == "beta") return IntervalMethod::BetaCollective;
  if (s == "gaussian") return IntervalMethod::GaussianAssumption;
  throw ConfigError("unknown interval method '" + s + "' (expected beta or gaussian)");
}

double a_prime(double eps, SampleCount n) {
  check_eps("a_prime", eps);
  return 2.0 * (1.0 - beta_quantile(eps, n));
}

double b_prime(double eps, SampleCount n) {
  check_eps("b_prime", eps);
  return 2.0 * beta_quantile(eps, n);
}

double delta_var_beta(SampleCount n, double eps) {
  check_eps("delta_var_beta", eps);
  const double tail = 120.0 / eps * std::exp(-n.value() / 16.0);
  return a_prime(eps / 6.0, n) * (1.0 + tail) - 1.0;
}

double delta_cov_beta(SampleCount n, double eps) {
  check_eps("delta_cov_beta", eps);
  return 0.5 * (0.5 * beta_spread(eps / 6.0, n) + beta_spread(eps * eps / 324.0, n));
}

double delta_var_gauss(SampleCount n, double eps) {
  check_eps("delta_var_gauss", eps);
  return 1.0 - chi2_fraction(eps, n);
}

double delta_cov_gauss(SampleCount n, double eps) {
  check_eps("delta_cov_gauss", eps);
  return 0.5 * delta_var_gauss(n, 0.5 * eps);
}

IntervalHalfWidths half_widths(SampleCount n, double eps, IntervalMethod method) {
  if (method == IntervalMethod::BetaCollective) {
    return {delta_var_beta(n, eps), delta_cov_beta(n, eps), method};
  }
  return {delta_var_gauss(n, eps), delta_cov_gauss(n, eps), method};
}

double variance_bound_factor(SampleCount n, double eps_pe, IntervalMethod method) {
  check_eps("variance_bound_factor", eps_pe);
  const double eps = 0.5 * eps_pe;
  if (method == IntervalMethod::BetaCollective) return 1.0 + delta_var_beta(n, eps);
  const double delta = delta_var_gauss(n, eps);
  if (delta > 0.01) return 1.0 / (1.0 - delta);
  return 1.0 + delta;
}

double var_upper_bound(double y_hat, SampleCount n, double eps_pe, IntervalMethod method) {
  if (!(y_hat >= 0.0) || !std::isfinite(y_hat)) {
    throw DomainError("var_upper_bound: variance must be nonnegative");
  }
  return y_hat * variance_bound_factor(n, eps_pe, method);
}

bool beta_deviation_condition(double z_hat, double spread, SampleCount n, double eps) {
  const double eps1 = eps / 6.0;
  const double outer = beta_spread(eps1, n);
  const double inner = beta_spread(eps1 * eps1 / 9.0, n);
  const double delta = 0.25 * inner * spread;
  const double c = 0.5 * z_hat - 0.125 * outer * spread;
  return delta >= 4.0 * c * eps1 / 9.0;
}

double cov_lower_bound(double x_hat, double y_hat, double z_hat, SampleCount n, double eps_pe,
                       IntervalMethod method) {
  check_moments("cov_lower_bound", x_hat, y_hat);
  check_eps("cov_lower_bound", eps_pe);
  const double eps = 0.5 * eps_pe;
  const double spread = 2.0 * std::sqrt(x_hat * y_hat);
  if (method == IntervalMethod::BetaCollective &&
      !beta_deviation_condition(z_hat, spread, n, eps)) {
    throw NumericalError("covariance bound: deviation condition delta >= 4 c eps' / 9 fails");
  }
  const double delta = half_widths(n, eps, method).delta_cov;
  return z_hat - delta * spread;
}

double cov_lower_bound_symmetric(double x_hat, double y_hat, double z_hat, SampleCount n,
                                 double eps_pe, IntervalMethod method) {
  check_moments("cov_lower_bound_symmetric", x_hat, y_hat);
  check_eps("cov_lower_bound_symmetric", eps_pe);
  const double eps = 0.5 * eps_pe;
  const double spread = x_hat + y_hat;
  if (method == IntervalMethod::BetaCollective &&
      !beta_deviation_condition(z_hat, spread, n, eps)) {
    throw NumericalError("covariance bound: deviation condition delta >= 4 c eps' / 9 fails");
  }
  const double delta = half_widths(n, eps, method).delta_cov;
  return z_hat - delta * spread;
}

}  // namespace cvqkd
