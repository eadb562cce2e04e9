#pragma once

// Uniform mid-rise quantizer over a symmetric window of range_sigmas
// standard deviations, 2^bits levels per quadrature. Samples outside the
// window clamp to the edge bins.

#include <cstdint>

namespace cvqkd {

struct DigitizationSpec {
  int bits = 6;
  double range_sigmas = 7.0;

  /// Throws ConfigError unless 2 <= bits <= 16 and range_sigmas > 0.
  void validate() const;
  [[nodiscard]] std::uint32_t levels() const { return 1u << bits; }
};

class Quantizer {
 public:
  Quantizer(const DigitizationSpec& spec, double sigma);

  [[nodiscard]] std::uint32_t bin(double value) const;
  [[nodiscard]] double center(std::uint32_t bin) const;
  [[nodiscard]] double quantize(double value) const { return center(bin(value)); }
  [[nodiscard]] double step() const { return step_; }
  [[nodiscard]] std::uint32_t levels() const { return levels_; }

 private:
  std::uint32_t levels_;
  double step_;
  double half_levels_;
};

/// Variance of the quantized unit Gaussian (bin centres weighted by the
/// Gaussian mass of each bin, edge bins absorbing the tails).
double quantized_unit_variance(const DigitizationSpec& spec);

}  // namespace cvqkd
