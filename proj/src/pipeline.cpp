#include "cvqkd/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cvqkd/dataset_io.hpp"
#include "cvqkd/error.hpp"
#include "cvqkd/gaussian_state.hpp"
#include "cvqkd/simulator.hpp"

namespace fs = std::filesystem;

namespace cvqkd {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw FormatError("cannot create output directory '" + dir.string() + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

nlohmann::ordered_json moments_json(const MomentEstimates& m) {
  return {{"x_hat", m.x_hat}, {"y_hat", m.y_hat}, {"z_hat", m.z_hat}, {"n", m.n}};
}

nlohmann::ordered_json params_json(const ChannelEstimate& c) {
  return {{"eta", c.eta}, {"u", c.u}};
}

nlohmann::ordered_json receiver_json(const ReceiverEstimate& r) {
  nlohmann::ordered_json j = {{"tau", r.receiver.tau}, {"t", r.receiver.t}};
  if (r.calibration) {
    const auto& c = *r.calibration;
    j["calibration"] = {{"m", c.m},
                        {"v_shot_plus", c.v_shot_plus},
                        {"v_shot_minus", c.v_shot_minus},
                        {"v_shot_hat", c.v_shot_hat},
                        {"t_hat", c.t_hat},
                        {"t_worst_case", c.t}};
  } else {
    j["calibration"] = nullptr;
  }
  return j;
}

nlohmann::ordered_json inputs_json(const BlockAnalysis& a) {
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : a.files) files.push_back(f.string());
  return {{"files", files},
          {"symbols", a.symbols_of_first(a.files.size())},
          {"histogram_sigma", a.sigma}};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string block_file_name(std::uint64_t block) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "block_%03llu.bin", static_cast<unsigned long long>(block));
  return buf;
}

std::uint32_t dataset_flags(const RunConfig& config) {
  std::uint32_t flags = 0;
  if (config.digitize_tx) flags |= kFlagTxDigitized;
  if (config.digitize_rx) flags |= kFlagRxDigitized;
  return flags;
}

nlohmann::ordered_json simulation_manifest(const RunConfig& config) {
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (std::uint64_t b = 0; b < config.blocks; ++b) {
    blocks.push_back({{"index", b}, {"file", block_file_name(b)}, {"records", config.block_size()}});
  }
  nlohmann::ordered_json j;
  j["kind"] = "cvqkd-symbols";
  j["format_version"] = kDatasetVersion;
  j["seed"] = config.seed;
  j["flags"] = dataset_flags(config);
  j["n_total"] = config.n_total;
  j["block_size"] = config.block_size();
  j["expected"] = {{"x", config.channel.mu},
                   {"y", config.channel.expected_y()},
                   {"z", config.channel.expected_z()}};
  j["blocks"] = blocks;
  j["config"] = to_json(config);
  j["config"]["run"].erase("threads");
  return j;
}

std::vector<fs::path> simulate_to_directory(const RunConfig& config, const fs::path& out_dir,
                                            unsigned threads) {
  config.validate();
  ensure_directory(out_dir);
  const auto options = config.symbol_options();
  const auto flags = dataset_flags(config);
  const std::uint64_t n_block = config.block_size();

  std::vector<fs::path> files(config.blocks);
  for (std::uint64_t b = 0; b < config.blocks; ++b) files[b] = out_dir / block_file_name(b);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= config.blocks) return;
      try {
        const SeededStream stream{config.seed, b};
        const auto data = generate_symbols(n_block, config.channel, options, stream);
        write_symbols(files[b], data, flags);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.blocks);
        return;
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), config.blocks));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  write_text(out_dir / kManifestName, simulation_manifest(config).dump(2) + "\n");
  return files;
}

CalibrationFiles calibrate_to_directory(const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  ensure_directory(out_dir);
  const SeededStream stream{config.seed, 0};
  const auto data = generate_calibration(config.calibration_m, config.channel.t, stream);
  CalibrationFiles files{out_dir / kVacuumFileName, out_dir / kElectronicFileName};
  write_calibration(files.vacuum, data.vacuum);
  write_calibration(files.electronic, data.electronic);
  return files;
}

std::vector<fs::path> resolve_data_paths(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (!fs::is_directory(in)) {
      if (!fs::exists(in)) throw FormatError("no such dataset '" + in.string() + "'");
      out.push_back(in);
      continue;
    }
    const auto manifest_path = in / kManifestName;
    std::ifstream f(manifest_path);
    if (!f) throw FormatError("directory '" + in.string() + "' has no " + kManifestName);
    nlohmann::json manifest;
    try {
      f >> manifest;
      for (const auto& block : manifest.at("blocks")) {
        out.push_back(in / block.at("file").get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("malformed manifest '" + manifest_path.string() + "': " + e.what());
    }
  }
  if (out.empty()) throw FormatError("no dataset files given");
  return out;
}

MomentEstimates BlockAnalysis::moments_of_first(std::size_t k) const {
  if (k == 0 || k > moments.size()) throw DomainError("block count out of range");
  MomentAccumulator acc;
  for (std::size_t i = 0; i < k; ++i) acc.merge(moments[i]);
  return acc.result();
}

double BlockAnalysis::entropy_of_first(std::size_t k) const {
  if (k == 0 || k > histograms.size()) throw DomainError("block count out of range");
  SymbolHistogram h = histograms[0];
  for (std::size_t i = 1; i < k; ++i) h.merge(histograms[i]);
  return h.entropy_bits();
}

std::uint64_t BlockAnalysis::symbols_of_first(std::size_t k) const {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < std::min(k, moments.size()); ++i) n += moments[i].count();
  return n;
}

BlockAnalysis analyse_blocks(const RunConfig& config, const std::vector<fs::path>& files) {
  config.validate();
  BlockAnalysis a;
  a.files = files;
  MomentAccumulator all;
  for (const auto& f : files) {
    MomentAccumulator acc;
    acc.add(read_symbols(f));
    all.merge(acc);
    a.moments.push_back(acc);
  }
  a.sigma = std::sqrt(all.result().y_hat);
  for (const auto& f : files) {
    const auto data = read_symbols(f);
    SymbolHistogram h(config.digitization, a.sigma);
    h.add(data.rx_q, data.rx_p);
    a.histograms.push_back(std::move(h));
  }
  return a;
}

ReceiverEstimate estimate_receiver(const RunConfig& config,
                                   const std::optional<CalibrationFiles>& files) {
  ReceiverEstimate out;
  out.receiver.tau = config.channel.tau;
  out.receiver.t = config.channel.t;
  if (!files) return out;
  const auto vac = read_calibration(files->vacuum);
  const auto elec = read_calibration(files->electronic);
  if (vac.size() != elec.size()) {
    throw FormatError("calibration files '" + files->vacuum.string() + "' and '" +
                      files->electronic.string() + "' differ in record count");
  }
  const auto bounds = shot_noise_calibration(receiver_variance(vac), receiver_variance(elec),
                                             SampleCount(static_cast<double>(vac.size())),
                                             config.budget.eps_cal);
  out.receiver.t = bounds.t;
  out.receiver.v_shot_plus = bounds.v_shot_plus;
  out.receiver.v_shot_minus = bounds.v_shot_minus;
  out.receiver.m = bounds.m;
  out.calibration = bounds;
  return out;
}

double leak_bits_for(const RunConfig& config, double n_symbols, double h_hat,
                     const MomentEstimates& point) {
  const double n_prime = n_symbols * config.ir.p_success();
  if (config.ir.leak_mode == LeakMode::Fixed) {
    return config.ir.leak_bits * n_symbols / static_cast<double>(config.n_total);
  }
  return leak_from_efficiency(n_prime, h_hat, config.ir.beta, snr_from_moments(point));
}

KeyRateResult evaluate_key_rate(const RunConfig& config, const MomentEstimates& point,
                                double h_hat, const TrustedReceiver& receiver,
                                double n_symbols) {
  const SampleCount n(n_symbols);
  KeyRateResult r;
  r.n_symbols = n_symbols;
  r.point = point;
  r.worst = worst_case_moments_at(point, n, config.budget.eps_pe, config.method,
                                  config.bound_tx_variance);
  const double mu = config.channel.mu;
  // Point estimates on few symbols can fall outside the physical region;
  // the average row is then reported as NaN.
  bool point_physical = true;
  try {
    r.point_params = channel_params(point, mu, receiver);
  } catch (const NumericalError&) {
    point_physical = false;
    r.point_params = {kNaN, kNaN};
  }
  r.worst_params = channel_params(r.worst, mu, receiver);
  if (config.chi_override) {
    r.chi_average = *config.chi_override;
    r.chi_worst = *config.chi_override;
  } else {
    r.chi_average =
        point_physical
            ? holevo_bound(mu, r.point_params.eta, r.point_params.u, receiver.tau, receiver.t)
            : kNaN;
    r.chi_worst = holevo_bound(mu, r.worst_params.eta, r.worst_params.u, receiver.tau, receiver.t);
  }
  const double n_prime = n_symbols * config.ir.p_success();
  r.ir.p_success = config.ir.p_success();
  r.ir.n_prime = n_prime;
  r.ir.beta = config.ir.beta;
  r.ir.leak_bits = leak_bits_for(config, n_symbols, h_hat, point);
  if (!(r.ir.leak_bits >= 0.0)) {
    throw NumericalError("reconciliation leak is negative: entropy estimate below beta I(A:B)");
  }
  r.entropy.h_hat = h_hat;
  r.entropy.n_prime = n_prime;
  r.entropy.penalty = entropy_penalty(SampleCount(n_prime), config.budget.eps_ent);
  r.entropy.num_bins = std::uint64_t{1} << (2 * config.digitization.bits);
  const int d = config.digitization.bits;
  r.worst_report = key_length(r.ir, r.entropy, r.chi_worst, config.budget, d, r.worst_params);
  if (std::isnan(r.chi_average)) {
    r.average_report = r.worst_report;
    r.average_report.holevo_bits = kNaN;
    r.average_report.key_length_bound = kNaN;
    r.average_report.key_length = kNaN;
    r.average_report.skf = kNaN;
    r.average_report.worst_case_params = r.point_params;
  } else {
    r.average_report =
        key_length(r.ir, r.entropy, r.chi_average, config.budget, d, r.point_params);
  }
  return r;
}

double noise_threshold(const RunConfig& config, const KeyRateResult& result,
                       const TrustedReceiver& receiver) {
  const double mu = config.channel.mu;
  const double eta = result.worst_params.eta;
  const int d = config.digitization.bits;
  auto bound = [&](double u) {
    const double chi = holevo_bound(mu, eta, u, receiver.tau, receiver.t);
    return key_length_bound(result.ir, result.entropy.h_hat, chi, config.budget, d);
  };
  if (!(bound(0.0) > 0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1e-2;
  while (bound(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> zero_crossing_symbols(const RunConfig& config,
                                            const MomentEstimates& point, double h_hat,
                                            const TrustedReceiver& receiver, double n_lo,
                                            double n_hi) {
  auto bound = [&](double log_n) {
    return evaluate_key_rate(config, point, h_hat, receiver, std::round(std::exp(log_n)))
        .worst_report.key_length_bound;
  };
  double lo = std::log(n_lo);
  double hi = std::log(n_hi);
  const double f_lo = bound(lo);
  const double f_hi = bound(hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  const bool rising = f_hi > 0.0;
  for (int i = 0; i < 100 && hi - lo > 1e-10; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((bound(mid) > 0.0) == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::round(std::exp(0.5 * (lo + hi)));
}

namespace {

SweepRow make_row(const RunConfig& config, const KeyRateResult& r,
                  const TrustedReceiver& receiver) {
  SweepRow row;
  row.n = r.n_symbols;
  row.pseudo_time_s = r.n_symbols / config.symbol_rate;
  row.skf_worst = r.worst_report.key_length_bound / r.worst_report.n_prime;
  row.skf_average = r.average_report.key_length_bound / r.average_report.n_prime;
  row.u_worst = r.worst_params.u;
  row.threshold = noise_threshold(config, r, receiver);
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_blocks(const RunConfig& config, const BlockAnalysis& analysis,
                                   const TrustedReceiver& receiver,
                                   const std::vector<std::size_t>& k_values) {
  std::vector<SweepRow> rows;
  std::size_t prev = 0;
  for (const auto k : k_values) {
    if (k <= prev || k > analysis.files.size()) {
      throw ConfigError("block counts must be ascending within 1.." +
                        std::to_string(analysis.files.size()));
    }
    prev = k;
    const auto r = evaluate_key_rate(config, analysis.moments_of_first(k),
                                     analysis.entropy_of_first(k), receiver,
                                     static_cast<double>(analysis.symbols_of_first(k)));
    rows.push_back(make_row(config, r, receiver));
  }
  return rows;
}

std::vector<SweepRow> sweep_extrapolated(const RunConfig& config, const BlockAnalysis& analysis,
                                         const TrustedReceiver& receiver,
                                         const std::vector<double>& n_values) {
  const std::size_t all = analysis.files.size();
  const auto point = analysis.moments_of_first(all);
  const double h_hat = analysis.entropy_of_first(all);
  std::vector<SweepRow> rows;
  for (const double n : n_values) {
    rows.push_back(make_row(config, evaluate_key_rate(config, point, h_hat, receiver, n), receiver));
  }
  return rows;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi >= lo) || points == 0 || (points == 1 && hi != lo)) {
    throw ConfigError("grid needs 0 < lo <= hi and at least 2 points");
  }
  std::vector<double> out(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = points == 1 ? lo : std::exp(a + (b - a) * static_cast<double>(i) / (points - 1));
    out[i] = std::round(out[i]);
  }
  out.front() = std::round(lo);
  out.back() = std::round(hi);
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "N,pseudo_time_s,skf_worst,skf_average,u_worst,threshold\r\n";
  for (const auto& r : rows) {
    out << format_double(r.n) << ',' << format_double(r.pseudo_time_s) << ','
        << format_double(r.skf_worst) << ',' << format_double(r.skf_average) << ','
        << format_double(r.u_worst) << ',' << format_double(r.threshold) << "\r\n";
  }
  return out.str();
}

std::string intervals_csv(const std::vector<double>& n_values, double eps) {
  std::ostringstream out;
  out << "n,delta_var_beta,delta_cov_beta,delta_var_gauss,delta_cov_gauss\r\n";
  for (const double v : n_values) {
    const SampleCount n(v);
    out << format_double(v) << ',' << format_double(delta_var_beta(n, eps)) << ','
        << format_double(delta_cov_beta(n, eps)) << ',' << format_double(delta_var_gauss(n, eps))
        << ',' << format_double(delta_cov_gauss(n, eps)) << "\r\n";
  }
  return out.str();
}

nlohmann::ordered_json key_rate_json(const RunConfig& config, const KeyRateResult& r,
                                     const ReceiverEstimate& receiver,
                                     const BlockAnalysis& analysis) {
  nlohmann::ordered_json j;
  j["config"] = to_json(config);
  j["inputs"] = inputs_json(analysis);
  j["receiver"] = receiver_json(receiver);
  j["moments"] = {{"point", moments_json(r.point)}, {"worst_case", moments_json(r.worst)}};
  j["channel"] = {{"point", params_json(r.point_params)},
                  {"worst_case", params_json(r.worst_params)}};
  j["holevo_bits"] = {{"point", r.chi_average}, {"worst_case", r.chi_worst}};
  j["entropy"] = {{"h_hat_bits", r.entropy.h_hat},
                  {"penalty_bits_per_symbol", r.entropy.penalty},
                  {"num_bins", r.entropy.num_bins}};
  j["reconciliation"] = {{"p_success", r.ir.p_success},
                         {"n_prime", r.ir.n_prime},
                         {"leak_bits", r.ir.leak_bits},
                         {"beta", r.ir.beta}};
  j["key_length"] = to_json(r.worst_report);
  j["key_length_average"] = to_json(r.average_report);
  j["noise_threshold_u"] = noise_threshold(config, r, receiver.receiver);
  return j;
}

nlohmann::ordered_json estimate_json(const RunConfig& config, const MomentEstimates& point,
                                     const ReceiverEstimate& receiver,
                                     const BlockAnalysis& analysis) {
  const auto worst = worst_case_moments(point, config.budget.eps_pe, config.method,
                                        config.bound_tx_variance);
  nlohmann::ordered_json j;
  j["config"] = to_json(config);
  j["inputs"] = inputs_json(analysis);
  j["receiver"] = receiver_json(receiver);
  j["moments"] = {{"point", moments_json(point)}, {"worst_case", moments_json(worst)}};
  j["channel"] = {
      {"point", params_json(channel_params(point, config.channel.mu, receiver.receiver))},
      {"worst_case", params_json(channel_params(worst, config.channel.mu, receiver.receiver))}};
  return j;
}

}  // namespace cvqkd
