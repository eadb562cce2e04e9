#pragma once

// Run configuration: flat "section.key = value" text, '#' starts a comment.
// Defaults form the profile "paper-table1"; a config file and --override
// assignments are applied on top, in that order.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cvqkd/confidence.hpp"
#include "cvqkd/digitization.hpp"
#include "cvqkd/security.hpp"
#include "cvqkd/simulator.hpp"

namespace cvqkd {

enum class LeakMode {
  Efficiency,  // leak = n' (H - beta log2(1 + snr))
  Fixed,       // leak = ir.leak_bits for run.n_total symbols, scaled per symbol
};

struct IrConfig {
  double fer = 0.0036;
  double beta = 0.916;
  LeakMode leak_mode = LeakMode::Efficiency;
  double leak_bits = 0.0;

  [[nodiscard]] double p_success() const { return 1.0 - fer; }
};

struct RunConfig {
  std::string profile = "paper-table1";
  ChannelModel channel;
  DigitizationSpec digitization;
  bool digitize_tx = true;
  bool digitize_rx = false;
  SecurityBudget budget;
  IrConfig ir;
  std::uint64_t n_total = 10'000'000;
  std::uint64_t blocks = 25;
  std::uint64_t seed = 1;
  double symbol_rate = 1e8;
  unsigned threads = 1;
  IntervalMethod method = IntervalMethod::BetaCollective;
  bool bound_tx_variance = false;
  std::uint64_t calibration_m = 1'000'000;
  std::optional<double> chi_override;

  /// Throws ConfigError on any inconsistency (including n_total not
  /// divisible by blocks).
  void validate() const;
  [[nodiscard]] std::uint64_t block_size() const { return n_total / blocks; }
  [[nodiscard]] SymbolOptions symbol_options() const;
};

RunConfig default_config();

/// Sets one dotted key from its text value. Throws ConfigError for unknown
/// keys or malformed values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Applies "key=value".
void apply_override(RunConfig& config, std::string_view assignment);

/// Parses config text on top of `config`; `origin` names the source in errors.
void parse_config_text(RunConfig& config, std::string_view text, const std::string& origin);

/// Reads a config file on top of the defaults. I/O failures are ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its resolved value.
nlohmann::ordered_json to_json(const RunConfig& config);

}  // namespace cvqkd
