#include "cvqkd/security.hpp"

#include <cmath>
#include <string>

#include "cvqkd/error.hpp"

namespace cvqkd {
namespace {

void check_unit(const char* name, double v) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

// log2(2 / delta^2) without forming delta^2.
double log2_two_over_square(double delta) { return 1.0 - 2.0 * std::log2(delta); }

}  // namespace

void SecurityBudget::validate() const {
  check_unit("budget.eps_h", eps_h);
  check_unit("budget.eps_s", eps_s);
  check_unit("budget.eps_ent", eps_ent);
  check_unit("budget.eps_pe", eps_pe);
  check_unit("budget.eps_cal", eps_cal);
  check_unit("budget.eps_ir", eps_ir);
  check_unit("budget.eps_qrng", eps_qrng);
  check_unit("total security parameter", total_epsilon(*this));
}

double total_epsilon(const SecurityBudget& b) {
  return b.eps_qrng + b.eps_h + b.eps_s + b.eps_ir + b.eps_ent + b.eps_pe + b.eps_cal;
}

double aep_penalty(double delta, int d) {
  if (!(delta > 0.0 && delta < 1.0) || d < 2) {
    throw DomainError("aep_penalty: need 0 < delta < 1 and d >= 2");
  }
  return 4.0 * (d + 1.0) * std::sqrt(log2_two_over_square(delta));
}

double aep_penalty_exact(double delta, int d) {
  if (!(delta > 0.0 && delta < 1.0) || d < 2) {
    throw DomainError("aep_penalty_exact: need 0 < delta < 1 and d >= 2");
  }
  // 1 - sqrt(1 - delta^2) = delta^2 / (1 + sqrt(1 - delta^2)).
  const double root = std::sqrt((1.0 - delta) * (1.0 + delta));
  const double ell = -(2.0 * std::log2(delta) - std::log2(1.0 + root));
  const double v = std::ldexp(1.0, d) + 2.0;
  return 4.0 * std::sqrt(ell) * std::log2(v);
}

IrProjection ir_projection_terms(double p_success, double eps_s) {
  if (!(p_success > 0.0 && p_success <= 1.0) || !(eps_s > 0.0 && eps_s < 1.0)) {
    throw DomainError("ir_projection_terms: need p in (0, 1] and eps_s in (0, 1)");
  }
  const double smoothing = p_success / 3.0 * eps_s * eps_s;
  return {smoothing, std::log2(p_success - smoothing)};
}

double leak_from_efficiency(double n_prime, double h_hat, double beta, double snr) {
  if (!(beta > 0.0 && beta <= 1.0) || !(snr >= 0.0)) {
    throw DomainError("leak_from_efficiency: need beta in (0, 1] and snr >= 0");
  }
  return n_prime * (h_hat - beta * std::log2(1.0 + snr));
}

double snr_from_moments(const MomentEstimates& m) {
  if (!(m.x_hat > 0.0)) throw DomainError("snr_from_moments: x_hat must be positive");
  const double signal = m.z_hat * m.z_hat / m.x_hat;
  const double noise = m.y_hat - signal;
  if (!(noise > 0.0)) throw NumericalError("snr_from_moments: nonpositive noise variance");
  return signal / noise;
}

double key_length_bound(const IrOutcome& ir, double h_hat, double chi,
                        const SecurityBudget& budget, int d) {
  EntropyEstimate entropy;
  entropy.h_hat = h_hat;
  entropy.n_prime = ir.n_prime;
  return key_length(ir, entropy, chi, budget, d).key_length_bound;
}

KeyLengthReport key_length(const IrOutcome& ir, const EntropyEstimate& entropy, double chi,
                           const SecurityBudget& budget, int d,
                           ChannelEstimate worst_case_params) {
  if (!(ir.leak_bits >= 0.0)) throw DomainError("key_length: leak must be nonnegative");
  if (!(chi >= 0.0)) throw DomainError("key_length: Holevo bound must be nonnegative");
  const SampleCount n(ir.n_prime);
  const double np = n.value();
  KeyLengthReport r;
  r.n_prime = np;
  r.h_hat_bits = entropy.h_hat;
  r.holevo_bits = chi;
  r.leak_bits = ir.leak_bits;
  r.entropy_penalty_bits = np * entropy_penalty(n, budget.eps_ent);
  const IrProjection proj = ir_projection_terms(ir.p_success, budget.eps_s);
  r.aep_penalty_bits = std::sqrt(np) * aep_penalty(proj.smoothing, d);
  r.ir_projection_bits = proj.log_correction_bits;
  r.hash_penalty_bits = -2.0 * std::log2(std::sqrt(2.0) * budget.eps_h);
  r.key_length_bound = np * (entropy.h_hat - chi) - r.leak_bits - r.entropy_penalty_bits -
                       r.aep_penalty_bits + r.ir_projection_bits - r.hash_penalty_bits;
  r.key_length = r.key_length_bound > 0.0 ? std::floor(r.key_length_bound) : 0.0;
  r.skf = r.key_length / np;
  r.worst_case_params = worst_case_params;
  return r;
}

nlohmann::ordered_json to_json(const KeyLengthReport& r) {
  nlohmann::ordered_json j;
  j["n_prime"] = r.n_prime;
  j["h_hat_bits"] = r.h_hat_bits;
  j["holevo_bits"] = r.holevo_bits;
  j["leak_bits"] = r.leak_bits;
  j["entropy_penalty_bits"] = r.entropy_penalty_bits;
  j["aep_penalty_bits"] = r.aep_penalty_bits;
  j["ir_projection_bits"] = r.ir_projection_bits;
  j["hash_penalty_bits"] = r.hash_penalty_bits;
  j["key_length_bound"] = r.key_length_bound;
  j["key_length"] = static_cast<std::int64_t>(r.key_length);
  j["skf"] = r.skf;
  j["worst_case_params"] = {{"eta", r.worst_case_params.eta}, {"u", r.worst_case_params.u}};
  return j;
}

nlohmann::ordered_json to_json(const SecurityBudget& b) {
  return {{"eps_h", b.eps_h},     {"eps_s", b.eps_s},     {"eps_ent", b.eps_ent},
          {"eps_pe", b.eps_pe},   {"eps_cal", b.eps_cal}, {"eps_ir", b.eps_ir},
          {"eps_qrng", b.eps_qrng}, {"total", total_epsilon(b)}};
}

}  // namespace cvqkd
