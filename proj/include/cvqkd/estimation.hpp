#pragma once

// Empirical moments, receiver calibration, discretized-entropy estimation
// and channel-parameter extraction.
//
// Units: every variance is per quadrature, normalized so that a vacuum
// state measured by the heterodyne receiver has variance 1. In these units
// a transmitted symbol of modulation strength mu has variance mu, and the
// receiver sees
//   y = tau eta (mu + u) + 1 + t,   z = sqrt(tau eta) mu.

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/confidence.hpp"
#include "cvqkd/digitization.hpp"

namespace cvqkd {

/// Paired transmitter/receiver quadratures, one entry per complex symbol.
struct QuadratureDataset {
  std::vector<double> tx_q;
  std::vector<double> tx_p;
  std::vector<double> rx_q;
  std::vector<double> rx_p;

  [[nodiscard]] std::size_t size() const { return tx_q.size(); }
  void resize(std::size_t n);
  /// Throws FormatError on unequal lengths or non-finite values.
  void validate() const;
};

/// Receiver-only quadratures (calibration records).
struct ReceiverSamples {
  std::vector<double> q;
  std::vector<double> p;

  [[nodiscard]] std::size_t size() const { return q.size(); }
};

struct MomentEstimates {
  double x_hat = 0.0;
  double y_hat = 0.0;
  double z_hat = 0.0;
  double n = 0.0;
};

/// Streaming sums for x_hat, y_hat, z_hat; blocks can be merged.
class MomentAccumulator {
 public:
  void add(double tx_q, double tx_p, double rx_q, double rx_p);
  void add(const QuadratureDataset& data);
  void merge(const MomentAccumulator& other);
  [[nodiscard]] MomentEstimates result() const;
  [[nodiscard]] std::uint64_t count() const { return count_; }

 private:
  long double sxx_ = 0.0L;
  long double syy_ = 0.0L;
  long double sxy_ = 0.0L;
  std::uint64_t count_ = 0;
};

/// x_hat = (1/2n) sum(q_tx^2 + p_tx^2), y_hat likewise for rx,
/// z_hat = (1/2n) sum(q_tx q_rx + p_tx p_rx). Throws DomainError when empty.
MomentEstimates empirical_moments(const QuadratureDataset& data);

/// Per-quadrature second moment (1/2m) sum(q^2 + p^2) of receiver samples.
double receiver_variance(const ReceiverSamples& samples);

struct CalibrationBounds {
  double v_shot_plus;
  double v_shot_minus;
  double v_shot_hat;
  double t;      // worst-case (smallest) trusted noise
  double t_hat;  // point estimate
  double m;
};

/// Shot-noise and trusted-noise bounds from vacuum and electronic-noise
/// variances measured on m samples each.
CalibrationBounds shot_noise_calibration(double var_vac, double var_elec, SampleCount m,
                                         double eps_cal);

struct TrustedReceiver {
  double tau = 1.0;
  double t = 0.0;
  double v_shot_plus = 1.0;
  double v_shot_minus = 1.0;
  double m = 0.0;
};

/// Plug-in Shannon entropy in bits of a histogram.
double empirical_entropy(std::span<const std::uint64_t> counts);

/// Per-symbol entropy penalty log2(n') sqrt(2 log2(2/eps_ent) / n').
double entropy_penalty(SampleCount n_prime, double eps_ent);

struct EntropyEstimate {
  double h_hat = 0.0;    // bits per complex symbol
  double penalty = 0.0;  // bits per complex symbol
  double n_prime = 0.0;
  std::uint64_t num_bins = 0;
};

/// Joint (q, p) histogram of digitized receiver samples.
class SymbolHistogram {
 public:
  SymbolHistogram(const DigitizationSpec& spec, double sigma);
  void add(double q, double p);
  void add(std::span<const double> q, std::span<const double> p);
  void merge(const SymbolHistogram& other);
  [[nodiscard]] std::span<const std::uint64_t> counts() const { return counts_; }
  [[nodiscard]] std::uint64_t total() const { return total_; }
  [[nodiscard]] double entropy_bits() const { return empirical_entropy(counts_); }

 private:
  Quantizer quantizer_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Entropy estimate with penalty for n' corrected symbols.
EntropyEstimate entropy_estimate(const SymbolHistogram& histogram, SampleCount n_prime,
                                 double eps_ent);

struct ChannelEstimate {
  double eta;
  double u;
};

/// Inverts the channel model: eta = z^2 / (tau x mu),
/// u = (y - 1 - t - tau eta mu) / (tau eta). Throws NumericalError when
/// eta is outside (0, 1] or u < 0 beyond a 1e-6 tolerance.
ChannelEstimate channel_params(const MomentEstimates& moments, double mu,
                               const TrustedReceiver& receiver);

/// Replaces y_hat and z_hat by their confidence bounds (and x_hat by its
/// upper bound when bound_tx_variance is set).
MomentEstimates worst_case_moments(const MomentEstimates& moments, double eps_pe,
                                   IntervalMethod method, bool bound_tx_variance);

/// Same bounds with the interval widths evaluated at n instead of
/// moments.n (analytic extrapolation of a fixed estimate to larger blocks).
MomentEstimates worst_case_moments_at(const MomentEstimates& moments, SampleCount n,
                                      double eps_pe, IntervalMethod method,
                                      bool bound_tx_variance);

}  // namespace cvqkd
