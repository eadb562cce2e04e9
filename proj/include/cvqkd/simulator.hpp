#pragma once

// Symbol-level simulator for Gaussian-modulated coherent states through a
// lossy, noisy channel and a trusted heterodyne receiver.
//
// Randomness comes from Philox4x32-10 keyed by the seed, with counter
// (symbol index, block index, stream tag). Any symbol of any block can be
// regenerated independently, so block-parallel generation is bit-identical
// to serial generation.

#include <array>
#include <cstdint>

#include "cvqkd/digitization.hpp"
#include "cvqkd/estimation.hpp"

namespace cvqkd {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

enum class StreamTag : std::uint32_t {
  Modulation = 0,
  ChannelNoise = 1,
  Vacuum = 2,
  Electronic = 3,
  SplitX = 4,
  SplitY = 5,
};

struct SeededStream {
  std::uint64_t seed = 1;
  std::uint64_t block_index = 0;

  /// Two independent uniforms in (0, 1) for (index, tag).
  [[nodiscard]] std::array<double, 2> uniforms(std::uint64_t index, StreamTag tag) const;
  /// Two independent standard normals for (index, tag), by inverse cdf.
  [[nodiscard]] std::array<double, 2> normals(std::uint64_t index, StreamTag tag) const;
};

enum class NoiseReferral { ChannelInput, ReceiverOutput };

struct ChannelModel {
  double eta = 0.35;
  double u = 6.3e-3;
  double tau = 0.69;
  double t = 25.71e-3;
  double mu = 1.45;
  NoiseReferral referral = NoiseReferral::ChannelInput;

  /// Throws ConfigError unless 0 < eta, tau <= 1, u, t >= 0, mu > 0.
  void validate() const;
  /// Per-quadrature receiver noise variance (vacuum + excess + trusted).
  [[nodiscard]] double noise_variance() const;
  [[nodiscard]] double expected_y() const;
  [[nodiscard]] double expected_z() const;
};

struct SymbolOptions {
  DigitizationSpec tx_digitization;
  bool digitize_tx = true;
  DigitizationSpec rx_digitization;
  bool digitize_rx = false;
};

/// n symbols of one block. Transmitted quadratures follow the quantized
/// Gaussian rescaled to variance exactly mu; rx = sqrt(tau eta) tx + noise.
QuadratureDataset generate_symbols(std::uint64_t n, const ChannelModel& model,
                                   const SymbolOptions& options, const SeededStream& stream);

struct CalibrationData {
  ReceiverSamples vacuum;      // variance 1 + t_true
  ReceiverSamples electronic;  // variance t_true
};

CalibrationData generate_calibration(std::uint64_t m, double t_true, const SeededStream& stream);

struct SplitStatistics {
  double x1_norm_sq;  // ||X_1||^2
  double x_norm_sq;   // ||X||^2
  double y_norm_sq;   // ||Y||^2
  double xy1;         // <X_1, Y_1>
  double xy2;         // <X_2, Y_2>
};

/// X, Y in R^{2n} standard normal with correlation rho per coordinate,
/// split into halves of n coordinates.
SplitStatistics orthogonal_split_trial(std::uint64_t n, const SeededStream& stream,
                                       double rho = 0.0);

}  // namespace cvqkd
