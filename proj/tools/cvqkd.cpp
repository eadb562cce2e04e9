// cvqkd: simulate, calibrate, estimate, keylen, sweep, intervals.
// Exit codes: 0 success, 2 config error, 3 data-format or I/O error,
// 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqkd/config.hpp"
#include "cvqkd/error.hpp"
#include "cvqkd/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cvqkd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumerical = 4;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<unsigned> threads;
  std::vector<std::string> overrides;
  std::string out;
};

struct DataOptions {
  std::vector<std::string> data;
  std::string calibration;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool out_required, const std::string& out_help) {
  cmd->add_option("--config", o.config_path, "Config file (flat section.key = value)");
  cmd->add_option("--seed", o.seed, "Override run.seed");
  cmd->add_option("--method", o.method, "Interval method")
      ->check(CLI::IsMember({"beta", "gaussian"}));
  cmd->add_option("--threads", o.threads, "Override run.threads")->check(CLI::Range(1, 1024));
  cmd->add_option("--override", o.overrides, "KEY=VALUE, repeatable")->take_all();
  auto* out = cmd->add_option("--out", o.out, out_help);
  if (out_required) out->required();
}

void add_data(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.data, "Dataset file or simulation directory, repeatable")
      ->required()
      ->take_all();
  cmd->add_option("--calibration", d.calibration,
                  "Directory with calibration_vacuum.bin and calibration_electronic.bin");
}

RunConfig resolve_config(const CommonOptions& o) {
  RunConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  for (const auto& ov : o.overrides) apply_override(c, ov);
  if (o.seed) c.seed = *o.seed;
  if (o.method) c.method = parse_interval_method(o.method->c_str());
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

std::optional<CalibrationFiles> calibration_files(const DataOptions& d) {
  if (d.calibration.empty()) return std::nullopt;
  const fs::path dir(d.calibration);
  return CalibrationFiles{dir / kVacuumFileName, dir / kElectronicFileName};
}

std::vector<fs::path> data_paths(const DataOptions& d) {
  std::vector<fs::path> in(d.data.begin(), d.data.end());
  return resolve_data_paths(in);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const fs::path path(out);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + out + "' for writing");
  f << text;
  f.flush();
  if (!f) throw FormatError("write failed for '" + out + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composable finite-size key lengths for Gaussian-modulated CVQKD"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  auto* sim = app.add_subcommand("simulate", "Simulate symbol blocks and write a manifest");
  add_common(sim, sim_opts, true, "Output directory");

  CommonOptions cal_opts;
  auto* cal = app.add_subcommand("calibrate", "Simulate vacuum and electronic-noise records");
  add_common(cal, cal_opts, true, "Output directory");

  CommonOptions est_opts;
  DataOptions est_data;
  auto* est = app.add_subcommand("estimate", "Moments, worst-case bounds, channel parameters");
  add_common(est, est_opts, false, "JSON output file (default stdout)");
  add_data(est, est_data);

  CommonOptions key_opts;
  DataOptions key_data;
  auto* key = app.add_subcommand("keylen", "Itemized composable key-length report");
  add_common(key, key_opts, false, "JSON output file (default stdout)");
  add_data(key, key_data);

  CommonOptions sw_opts;
  DataOptions sw_data;
  std::vector<std::size_t> k_values;
  std::optional<double> sw_n_min;
  std::optional<double> sw_n_max;
  std::size_t sw_points = 50;
  auto* sw = app.add_subcommand("sweep", "Secret key fraction against block length (CSV)");
  add_common(sw, sw_opts, false, "CSV output file (default stdout)");
  add_data(sw, sw_data);
  sw->add_option("--k", k_values, "Cumulative block counts, ascending (default 1..blocks)")
      ->take_all();
  sw->add_option("--n-min", sw_n_min, "Extrapolate interval widths from this N");
  sw->add_option("--n-max", sw_n_max, "Extrapolate interval widths up to this N");
  sw->add_option("--points", sw_points, "Grid points for extrapolation")->check(CLI::Range(1, 100000));

  CommonOptions int_opts;
  double int_n_min = 1e4;
  double int_n_max = 1e9;
  std::size_t int_points = 50;
  double int_eps = 1e-10;
  auto* intervals = app.add_subcommand("intervals", "Beta and Gaussian interval widths (CSV)");
  add_common(intervals, int_opts, false, "CSV output file (default stdout)");
  intervals->add_option("--n-min", int_n_min, "Smallest n");
  intervals->add_option("--n-max", int_n_max, "Largest n");
  intervals->add_option("--points", int_points, "Log-spaced grid points")
      ->check(CLI::Range(1, 100000));
  intervals->add_option("--eps", int_eps, "Failure probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (sim->parsed()) {
      const auto config = resolve_config(sim_opts);
      const auto files = simulate_to_directory(config, sim_opts.out, config.threads);
      std::cout << "wrote " << files.size() << " blocks and " << kManifestName << " to "
                << sim_opts.out << "\n";
    } else if (cal->parsed()) {
      const auto config = resolve_config(cal_opts);
      const auto files = calibrate_to_directory(config, cal_opts.out);
      std::cout << "wrote " << files.vacuum.string() << " and " << files.electronic.string()
                << "\n";
    } else if (est->parsed()) {
      const auto config = resolve_config(est_opts);
      const auto paths = data_paths(est_data);
      const auto receiver = estimate_receiver(config, calibration_files(est_data));
      const auto analysis = analyse_blocks(config, paths);
      const auto point = analysis.moments_of_first(analysis.files.size());
      emit(est_opts.out, estimate_json(config, point, receiver, analysis).dump(2) + "\n");
    } else if (key->parsed()) {
      const auto config = resolve_config(key_opts);
      const auto paths = data_paths(key_data);
      const auto receiver = estimate_receiver(config, calibration_files(key_data));
      const auto analysis = analyse_blocks(config, paths);
      const std::size_t all = analysis.files.size();
      const auto result =
          evaluate_key_rate(config, analysis.moments_of_first(all), analysis.entropy_of_first(all),
                            receiver.receiver, static_cast<double>(analysis.symbols_of_first(all)));
      emit(key_opts.out, key_rate_json(config, result, receiver, analysis).dump(2) + "\n");
    } else if (sw->parsed()) {
      const auto config = resolve_config(sw_opts);
      if (sw_n_min.has_value() != sw_n_max.has_value()) {
        throw ConfigError("--n-min and --n-max must be given together");
      }
      if (sw_n_min && !k_values.empty()) throw ConfigError("--k cannot be combined with --n-min");
      const auto paths = data_paths(sw_data);
      const auto receiver = estimate_receiver(config, calibration_files(sw_data));
      const auto analysis = analyse_blocks(config, paths);
      std::vector<SweepRow> rows;
      if (sw_n_min) {
        rows = sweep_extrapolated(config, analysis, receiver.receiver,
                                  log_grid(*sw_n_min, *sw_n_max, sw_points));
      } else {
        if (k_values.empty()) {
          for (std::size_t k = 1; k <= analysis.files.size(); ++k) k_values.push_back(k);
        }
        rows = sweep_blocks(config, analysis, receiver.receiver, k_values);
      }
      emit(sw_opts.out, sweep_csv(rows));
    } else if (intervals->parsed()) {
      resolve_config(int_opts);
      if (!(int_eps > 0.0 && int_eps < 1.0)) throw ConfigError("--eps must lie in (0, 1)");
      if (!(int_n_min >= 2.0)) throw ConfigError("--n-min must be at least 2");
      emit(int_opts.out, intervals_csv(log_grid(int_n_min, int_n_max, int_points), int_eps));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
