#pragma once

// End-to-end pipeline: simulation to block files, calibration files,
// moment and entropy analysis, worst-case key length, sweeps and interval
// tables.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvqkd/config.hpp"
#include "cvqkd/estimation.hpp"
#include "cvqkd/security.hpp"

namespace cvqkd {

inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kVacuumFileName = "calibration_vacuum.bin";
inline constexpr const char* kElectronicFileName = "calibration_electronic.bin";

std::string block_file_name(std::uint64_t block);

/// Flag bits recorded in the dataset headers for this configuration.
std::uint32_t dataset_flags(const RunConfig& config);

/// Simulates config.n_total symbols in config.blocks blocks on `threads`
/// workers and writes one file per block plus manifest.json into out_dir.
/// Output is identical for any thread count. Returns the block files.
std::vector<std::filesystem::path> simulate_to_directory(const RunConfig& config,
                                                         const std::filesystem::path& out_dir,
                                                         unsigned threads);

/// Manifest content for a simulation run.
nlohmann::ordered_json simulation_manifest(const RunConfig& config);

struct CalibrationFiles {
  std::filesystem::path vacuum;
  std::filesystem::path electronic;
};

/// Writes vacuum and electronic-noise records (calibration.m each) with
/// trusted noise channel.t.
CalibrationFiles calibrate_to_directory(const RunConfig& config,
                                        const std::filesystem::path& out_dir);

/// Expands directories holding manifest.json into their block files.
/// Other paths are taken as dataset files.
std::vector<std::filesystem::path> resolve_data_paths(
    const std::vector<std::filesystem::path>& inputs);

/// Per-block moments and receiver histograms. The histogram grid is set by
/// sigma = sqrt(y_hat) over all blocks.
struct BlockAnalysis {
  std::vector<std::filesystem::path> files;
  std::vector<MomentAccumulator> moments;
  std::vector<SymbolHistogram> histograms;
  double sigma = 1.0;

  [[nodiscard]] MomentEstimates moments_of_first(std::size_t k) const;
  [[nodiscard]] double entropy_of_first(std::size_t k) const;
  [[nodiscard]] std::uint64_t symbols_of_first(std::size_t k) const;
};

BlockAnalysis analyse_blocks(const RunConfig& config,
                             const std::vector<std::filesystem::path>& files);

struct ReceiverEstimate {
  TrustedReceiver receiver;
  std::optional<CalibrationBounds> calibration;
};

/// Known (tau, t) from the config, or the worst-case t from calibration
/// files when given.
ReceiverEstimate estimate_receiver(const RunConfig& config,
                                   const std::optional<CalibrationFiles>& files);

struct KeyRateResult {
  double n_symbols = 0.0;
  MomentEstimates point;
  MomentEstimates worst;
  ChannelEstimate point_params{0.0, 0.0};
  ChannelEstimate worst_params{0.0, 0.0};
  double chi_average = 0.0;
  double chi_worst = 0.0;
  IrOutcome ir;
  EntropyEstimate entropy;
  KeyLengthReport worst_report;
  KeyLengthReport average_report;
};

/// Leak in bits for n_symbols symbols.
double leak_bits_for(const RunConfig& config, double n_symbols, double h_hat,
                     const MomentEstimates& point);

/// Key length for n_symbols symbols whose moments are `point` (possibly
/// estimated on fewer symbols; interval widths use n_symbols).
KeyRateResult evaluate_key_rate(const RunConfig& config, const MomentEstimates& point,
                                double h_hat, const TrustedReceiver& receiver,
                                double n_symbols);

/// Largest u at which the worst-case pre-floor bound is zero, keeping
/// every other term of `result` fixed. Zero if the bound is negative at u = 0.
double noise_threshold(const RunConfig& config, const KeyRateResult& result,
                       const TrustedReceiver& receiver);

/// N at which the worst-case pre-floor bound crosses zero, by bisection in
/// log N over [n_lo, n_hi]. Empty when there is no sign change.
std::optional<double> zero_crossing_symbols(const RunConfig& config,
                                            const MomentEstimates& point, double h_hat,
                                            const TrustedReceiver& receiver, double n_lo,
                                            double n_hi);

struct SweepRow {
  double n = 0.0;
  double pseudo_time_s = 0.0;
  double skf_worst = 0.0;    // signed pre-floor bound / n'
  double skf_average = 0.0;  // signed pre-floor bound / n'
  double u_worst = 0.0;
  double threshold = 0.0;
};

/// One row per cumulative block count in k_values (ascending, 1..blocks).
std::vector<SweepRow> sweep_blocks(const RunConfig& config, const BlockAnalysis& analysis,
                                   const TrustedReceiver& receiver,
                                   const std::vector<std::size_t>& k_values);

/// Moments of all blocks, interval widths extrapolated to each N in n_values.
std::vector<SweepRow> sweep_extrapolated(const RunConfig& config, const BlockAnalysis& analysis,
                                         const TrustedReceiver& receiver,
                                         const std::vector<double>& n_values);

/// `points` log-spaced values over [lo, hi], endpoints included, rounded to
/// integers.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Columns n, delta_var_beta, delta_cov_beta, delta_var_gauss, delta_cov_gauss.
std::string intervals_csv(const std::vector<double>& n_values, double eps);

/// Report for `keylen`: config, inputs, moments, parameters, both rows.
nlohmann::ordered_json key_rate_json(const RunConfig& config, const KeyRateResult& result,
                                     const ReceiverEstimate& receiver,
                                     const BlockAnalysis& analysis);

/// Report for `estimate`.
nlohmann::ordered_json estimate_json(const RunConfig& config, const MomentEstimates& point,
                                     const ReceiverEstimate& receiver,
                                     const BlockAnalysis& analysis);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace cvqkd
