#include "cvqkd/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvqkd/error.hpp"

namespace cvqkd {

void QuadratureDataset::resize(std::size_t n) {
  tx_q.resize(n);
  tx_p.resize(n);
  rx_q.resize(n);
  rx_p.resize(n);
}

void QuadratureDataset::validate() const {
  const std::size_t n = tx_q.size();
  if (tx_p.size() != n || rx_q.size() != n || rx_p.size() != n) {
    throw FormatError("quadrature arrays differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(tx_q[i]) || !std::isfinite(tx_p[i]) || !std::isfinite(rx_q[i]) ||
        !std::isfinite(rx_p[i])) {
      throw FormatError("non-finite quadrature value at symbol " + std::to_string(i));
    }
  }
}

void MomentAccumulator::add(double tx_q, double tx_p, double rx_q, double rx_p) {
  sxx_ += static_cast<long double>(tx_q) * tx_q + static_cast<long double>(tx_p) * tx_p;
  syy_ += static_cast<long double>(rx_q) * rx_q + static_cast<long double>(rx_p) * rx_p;
  sxy_ += static_cast<long double>(tx_q) * rx_q + static_cast<long double>(tx_p) * rx_p;
  ++count_;
}

void MomentAccumulator::add(const QuadratureDataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    add(data.tx_q[i], data.tx_p[i], data.rx_q[i], data.rx_p[i]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  sxx_ += other.sxx_;
  syy_ += other.syy_;
  sxy_ += other.sxy_;
  count_ += other.count_;
}

MomentEstimates MomentAccumulator::result() const {
  if (count_ == 0) throw DomainError("moments of an empty dataset");
  const long double norm = 2.0L * static_cast<long double>(count_);
  return {static_cast<double>(sxx_ / norm), static_cast<double>(syy_ / norm),
          static_cast<double>(sxy_ / norm), static_cast<double>(count_)};
}

MomentEstimates empirical_moments(const QuadratureDataset& data) {
  data.validate();
  MomentAccumulator acc;
  acc.add(data);
  return acc.result();
}

double receiver_variance(const ReceiverSamples& samples) {
  if (samples.q.empty() || samples.q.size() != samples.p.size()) {
    throw DomainError("receiver samples empty or unequal in length");
  }
  long double s = 0.0L;
  for (std::size_t i = 0; i < samples.q.size(); ++i) {
    s += static_cast<long double>(samples.q[i]) * samples.q[i] +
         static_cast<long double>(samples.p[i]) * samples.p[i];
  }
  return static_cast<double>(s / (2.0L * samples.q.size()));
}

CalibrationBounds shot_noise_calibration(double var_vac, double var_elec, SampleCount m,
                                         double eps_cal) {
  if (!(var_elec >= 0.0) || !(var_vac > var_elec) || !std::isfinite(var_vac)) {
    throw DomainError("calibration requires var_vac > var_elec >= 0");
  }
  const double delta = delta_var_gauss(m, 0.25 * eps_cal);
  CalibrationBounds out{};
  out.v_shot_plus = (1.0 + delta) * var_vac - (1.0 - delta) * var_elec;
  out.v_shot_minus = (1.0 - delta) * var_vac - (1.0 + delta) * var_elec;
  out.v_shot_hat = var_vac - var_elec;
  if (!(out.v_shot_minus > 0.0)) {
    throw NumericalError("calibration too noisy: lower shot-noise bound is not positive");
  }
  const double ratio = var_elec / var_vac;
  out.t_hat = 1.0 / (1.0 - ratio) - 1.0;
  out.t = 1.0 / (1.0 - (1.0 - delta) / (1.0 + delta) * ratio) - 1.0;
  out.m = m.value();
  return out;
}

double empirical_entropy(std::span<const std::uint64_t> counts) {
  long double total = 0.0L;
  for (const auto c : counts) total += static_cast<long double>(c);
  if (!(total > 0.0L)) throw DomainError("entropy of an empty histogram");
  long double h = 0.0L;
  for (const auto c : counts) {
    if (c == 0) continue;
    const long double f = static_cast<long double>(c) / total;
    h -= f * std::log2(f);
  }
  return static_cast<double>(h);
}

double entropy_penalty(SampleCount n_prime, double eps_ent) {
  if (!(eps_ent > 0.0 && eps_ent <= 2.0)) {
    throw DomainError("entropy_penalty: eps_ent must lie in (0, 2]");
  }
  const double n = n_prime.value();
  const double log_term = std::max(0.0, 1.0 - std::log2(eps_ent));
  return std::log2(n) * std::sqrt(2.0 * log_term / n);
}

SymbolHistogram::SymbolHistogram(const DigitizationSpec& spec, double sigma)
    : quantizer_(spec, sigma),
      counts_(static_cast<std::size_t>(spec.levels()) * spec.levels(), 0) {}

void SymbolHistogram::add(double q, double p) {
  const std::size_t idx =
      static_cast<std::size_t>(quantizer_.bin(q)) * quantizer_.levels() + quantizer_.bin(p);
  ++counts_[idx];
  ++total_;
}

void SymbolHistogram::add(std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw DomainError("histogram input lengths differ");
  for (std::size_t i = 0; i < q.size(); ++i) add(q[i], p[i]);
}

void SymbolHistogram::merge(const SymbolHistogram& other) {
  if (other.counts_.size() != counts_.size() || other.quantizer_.step() != quantizer_.step()) {
    throw DomainError("cannot merge histograms over different grids");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

EntropyEstimate entropy_estimate(const SymbolHistogram& histogram, SampleCount n_prime,
                                 double eps_ent) {
  EntropyEstimate out;
  out.h_hat = histogram.entropy_bits();
  out.penalty = entropy_penalty(n_prime, eps_ent);
  out.n_prime = n_prime.value();
  out.num_bins = histogram.counts().size();
  return out;
}

ChannelEstimate channel_params(const MomentEstimates& moments, double mu,
                               const TrustedReceiver& receiver) {
  constexpr double kTolerance = 1e-6;
  if (!(mu > 0.0)) throw DomainError("channel_params: modulation strength must be positive");
  if (!(moments.x_hat > 0.0)) throw DomainError("channel_params: x_hat must be positive");
  if (!(receiver.tau > 0.0 && receiver.tau <= 1.0) || !(receiver.t >= 0.0)) {
    throw DomainError("channel_params: receiver parameters out of range");
  }
  if (!(moments.z_hat > 0.0)) {
    throw NumericalError("channel_params: covariance bound is not positive, no transmittance");
  }
  double eta = moments.z_hat * moments.z_hat / (receiver.tau * moments.x_hat * mu);
  if (eta > 1.0 + kTolerance) {
    throw NumericalError("channel_params: implied transmittance " + std::to_string(eta) +
                         " exceeds 1");
  }
  eta = std::min(eta, 1.0);
  const double gain = receiver.tau * eta;
  double u = (moments.y_hat - 1.0 - receiver.t - gain * mu) / gain;
  if (u < -kTolerance) {
    throw NumericalError("channel_params: implied excess noise " + std::to_string(u) +
                         " is negative (received variance below the noise floor)");
  }
  u = std::max(u, 0.0);
  return {eta, u};
}

MomentEstimates worst_case_moments_at(const MomentEstimates& moments, SampleCount n,
                                      double eps_pe, IntervalMethod method,
                                      bool bound_tx_variance) {
  MomentEstimates out = moments;
  out.y_hat = var_upper_bound(moments.y_hat, n, eps_pe, method);
  if (bound_tx_variance) out.x_hat = var_upper_bound(moments.x_hat, n, eps_pe, method);
  out.z_hat = cov_lower_bound(moments.x_hat, moments.y_hat, moments.z_hat, n, eps_pe, method);
  out.n = n.value();
  return out;
}

MomentEstimates worst_case_moments(const MomentEstimates& moments, double eps_pe,
                                   IntervalMethod method, bool bound_tx_variance) {
  return worst_case_moments_at(moments, SampleCount(moments.n), eps_pe, method,
                               bound_tx_variance);
}

}  // namespace cvqkd
