#include "cvqkd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cvqkd/error.hpp"

namespace cvqkd {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                    " (expected " + expected + ")");
}

double parse_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) bad_value(key, value, "a number");
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view value) {
  const double v = parse_real(key, value);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15) {
    bad_value(key, value, "a nonnegative integer");
  }
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

}  // namespace

void RunConfig::validate() const {
  channel.validate();
  digitization.validate();
  budget.validate();
  if (!(ir.fer >= 0.0 && ir.fer < 1.0)) throw ConfigError("ir.fer must lie in [0, 1)");
  if (!(ir.beta > 0.0 && ir.beta <= 1.0)) throw ConfigError("ir.beta must lie in (0, 1]");
  if (!(ir.leak_bits >= 0.0)) throw ConfigError("ir.leak_bits must be nonnegative");
  if (blocks == 0) throw ConfigError("run.blocks must be positive");
  if (n_total < 2 * blocks) throw ConfigError("run.n_total must be at least 2 per block");
  if (n_total % blocks != 0) {
    throw ConfigError("run.n_total (" + std::to_string(n_total) +
                      ") is not divisible by run.blocks (" + std::to_string(blocks) + ")");
  }
  if (blocks > 100000) throw ConfigError("run.blocks must not exceed 100000");
  if (!(symbol_rate > 0.0)) throw ConfigError("run.symbol_rate must be positive");
  if (threads == 0) throw ConfigError("run.threads must be positive");
  if (calibration_m < 1000) throw ConfigError("calibration.m must be at least 1000");
  if (chi_override && !(*chi_override >= 0.0)) {
    throw ConfigError("estimation.chi_override must be nonnegative");
  }
  if (channel.tau == 1.0 && channel.t != 0.0) {
    throw ConfigError("channel.t must be 0 when channel.tau is 1");
  }
}

SymbolOptions RunConfig::symbol_options() const {
  SymbolOptions o;
  o.tx_digitization = digitization;
  o.digitize_tx = digitize_tx;
  o.rx_digitization = digitization;
  o.digitize_rx = digitize_rx;
  return o;
}

RunConfig default_config() { return RunConfig{}; }

void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "profile") {
    c.profile = std::string(value);
  } else if (key == "channel.mu") {
    c.channel.mu = parse_real(key, value);
  } else if (key == "channel.eta") {
    c.channel.eta = parse_real(key, value);
  } else if (key == "channel.u") {
    c.channel.u = parse_real(key, value);
  } else if (key == "channel.tau") {
    c.channel.tau = parse_real(key, value);
  } else if (key == "channel.t") {
    c.channel.t = parse_real(key, value);
  } else if (key == "channel.noise_referral") {
    if (value == "input") {
      c.channel.referral = NoiseReferral::ChannelInput;
    } else if (value == "output") {
      c.channel.referral = NoiseReferral::ReceiverOutput;
    } else {
      bad_value(key, value, "input or output");
    }
  } else if (key == "digitization.bits") {
    const auto bits = parse_count(key, value);
    if (bits > 64) bad_value(key, value, "an integer in [2, 16]");
    c.digitization.bits = static_cast<int>(bits);
  } else if (key == "digitization.range_sigmas") {
    c.digitization.range_sigmas = parse_real(key, value);
  } else if (key == "digitization.digitize_tx") {
    c.digitize_tx = parse_bool(key, value);
  } else if (key == "digitization.digitize_rx") {
    c.digitize_rx = parse_bool(key, value);
  } else if (key == "budget.eps_h") {
    c.budget.eps_h = parse_real(key, value);
  } else if (key == "budget.eps_s") {
    c.budget.eps_s = parse_real(key, value);
  } else if (key == "budget.eps_ent") {
    c.budget.eps_ent = parse_real(key, value);
  } else if (key == "budget.eps_pe") {
    c.budget.eps_pe = parse_real(key, value);
  } else if (key == "budget.eps_cal") {
    c.budget.eps_cal = parse_real(key, value);
  } else if (key == "budget.eps_ir") {
    c.budget.eps_ir = parse_real(key, value);
  } else if (key == "budget.eps_qrng") {
    c.budget.eps_qrng = parse_real(key, value);
  } else if (key == "ir.fer") {
    c.ir.fer = parse_real(key, value);
  } else if (key == "ir.beta") {
    c.ir.beta = parse_real(key, value);
  } else if (key == "ir.leak_mode") {
    if (value == "beta") {
      c.ir.leak_mode = LeakMode::Efficiency;
    } else if (value == "fixed") {
      c.ir.leak_mode = LeakMode::Fixed;
    } else {
      bad_value(key, value, "beta or fixed");
    }
  } else if (key == "ir.leak_bits") {
    c.ir.leak_bits = parse_real(key, value);
  } else if (key == "run.n_total") {
    c.n_total = parse_count(key, value);
  } else if (key == "run.blocks") {
    c.blocks = parse_count(key, value);
  } else if (key == "run.seed") {
    std::uint64_t seed = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, seed);
    if (ec != std::errc() || ptr != end) bad_value(key, value, "an unsigned 64-bit integer");
    c.seed = seed;
  } else if (key == "run.symbol_rate") {
    c.symbol_rate = parse_real(key, value);
  } else if (key == "run.threads") {
    const auto threads = parse_count(key, value);
    if (threads > 1024) bad_value(key, value, "an integer in [1, 1024]");
    c.threads = static_cast<unsigned>(threads);
  } else if (key == "estimation.method") {
    c.method = parse_interval_method(std::string(value).c_str());
  } else if (key == "estimation.bound_tx_variance") {
    c.bound_tx_variance = parse_bool(key, value);
  } else if (key == "estimation.chi_override") {
    if (value == "none") {
      c.chi_override.reset();
    } else {
      c.chi_override = parse_real(key, value);
    }
  } else if (key == "calibration.m") {
    c.calibration_m = parse_count(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_override(RunConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form KEY=VALUE");
  }
  set_config_value(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void parse_config_text(RunConfig& config, std::string_view text, const std::string& origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig config = default_config();
  parse_config_text(config, ss.str(), path.string());
  return config;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["profile"] = c.profile;
  j["channel"] = {{"mu", c.channel.mu},
                  {"eta", c.channel.eta},
                  {"u", c.channel.u},
                  {"tau", c.channel.tau},
                  {"t", c.channel.t},
                  {"noise_referral",
                   c.channel.referral == NoiseReferral::ChannelInput ? "input" : "output"}};
  j["digitization"] = {{"bits", c.digitization.bits},
                       {"range_sigmas", c.digitization.range_sigmas},
                       {"digitize_tx", c.digitize_tx},
                       {"digitize_rx", c.digitize_rx}};
  j["budget"] = to_json(c.budget);
  j["ir"] = {{"fer", c.ir.fer},
             {"beta", c.ir.beta},
             {"leak_mode", c.ir.leak_mode == LeakMode::Efficiency ? "beta" : "fixed"},
             {"leak_bits", c.ir.leak_bits}};
  j["run"] = {{"n_total", c.n_total},
              {"blocks", c.blocks},
              {"seed", c.seed},
              {"symbol_rate", c.symbol_rate},
              {"threads", c.threads}};
  nlohmann::ordered_json est = {{"method", to_string(c.method)},
                                {"bound_tx_variance", c.bound_tx_variance}};
  if (c.chi_override) {
    est["chi_override"] = *c.chi_override;
  } else {
    est["chi_override"] = "none";
  }
  j["estimation"] = est;
  j["calibration"] = {{"m", c.calibration_m}};
  return j;
}

}  // namespace cvqkd
