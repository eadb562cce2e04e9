#pragma once

// Composable key length for reverse-reconciled CVQKD with digitized
// receiver data. All quantities are in bits (base-2 logarithms).
//
//   l = n' (H - chi) - leak
//       - log2(n') sqrt(2 n' log2(2 / eps_ent))
//       - sqrt(n') D_AEP((p/3) eps_s^2, d)
//       + log2(p - (p/3) eps_s^2) + 2 log2(sqrt(2) eps_h)
//
// with D_AEP(delta, d) <= 4 (d + 1) sqrt(log2(2 / delta^2)).
// The total failure probability is the sum of the seven budget entries.

#include <json.hpp>

#include "cvqkd/estimation.hpp"

namespace cvqkd {

struct SecurityBudget {
  double eps_h = 1e-10;
  double eps_s = 1e-10;
  double eps_ent = 1e-10;
  double eps_pe = 1e-10;
  double eps_cal = 1e-10;
  double eps_ir = 1e-12;
  double eps_qrng = 2e-6;

  /// Throws ConfigError unless every entry and the total lie in (0, 1).
  void validate() const;
};

double total_epsilon(const SecurityBudget& budget);

/// Closed-form AEP penalty 4 (d + 1) sqrt(log2(2 / delta^2)).
double aep_penalty(double delta, int d);

/// 4 sqrt(l(delta)) log2(2^d + 2) with l(delta) = -log2(1 - sqrt(1 - delta^2)).
double aep_penalty_exact(double delta, int d);

struct IrProjection {
  double smoothing;            // (p/3) eps_s^2
  double log_correction_bits;  // log2(p - smoothing), <= 0
};

IrProjection ir_projection_terms(double p_success, double eps_s);

struct IrOutcome {
  double p_success = 1.0;  // 1 - FER
  double n_prime = 0.0;
  double leak_bits = 0.0;
  double beta = 1.0;  // reporting only
};

/// Model-based leak n' (H - beta log2(1 + snr)) for simulation sweeps.
double leak_from_efficiency(double n_prime, double h_hat, double beta, double snr);

/// snr = (z^2 / x) / (y - z^2 / x) from per-quadrature moments.
double snr_from_moments(const MomentEstimates& moments);

struct KeyLengthReport {
  double n_prime = 0.0;
  double h_hat_bits = 0.0;
  double holevo_bits = 0.0;
  double leak_bits = 0.0;
  double aep_penalty_bits = 0.0;      // subtracted
  double entropy_penalty_bits = 0.0;  // subtracted
  double ir_projection_bits = 0.0;    // added, <= 0
  double hash_penalty_bits = 0.0;     // subtracted
  double key_length_bound = 0.0;      // signed, before flooring
  double key_length = 0.0;            // max(0, floor(bound))
  double skf = 0.0;                   // key_length / n_prime
  ChannelEstimate worst_case_params{0.0, 0.0};
};

/// Signed key-length bound before flooring; the same sum key_length uses.
double key_length_bound(const IrOutcome& ir, double h_hat, double chi,
                        const SecurityBudget& budget, int d);

KeyLengthReport key_length(const IrOutcome& ir, const EntropyEstimate& entropy, double chi,
                           const SecurityBudget& budget, int d,
                           ChannelEstimate worst_case_params = {0.0, 0.0});

nlohmann::ordered_json to_json(const KeyLengthReport& report);
nlohmann::ordered_json to_json(const SecurityBudget& budget);

}  // namespace cvqkd
