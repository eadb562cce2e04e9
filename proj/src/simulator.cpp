#include "cvqkd/simulator.hpp"

#include <cmath>
#include <string>

#include "cvqkd/error.hpp"
#include "cvqkd/special_functions.hpp"

namespace cvqkd {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double uniform_from_bits(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t u = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0 = 0;
    std::uint32_t lo0 = 0;
    std::uint32_t hi1 = 0;
    std::uint32_t lo1 = 0;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::array<double, 2> SeededStream::uniforms(std::uint64_t index, StreamTag tag) const {
  if (block_index > 0xFFFFFFFFull) throw DomainError("block index exceeds 32 bits");
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(block_index), static_cast<std::uint32_t>(tag)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32_10(ctr, key);
  return {uniform_from_bits(out[0], out[1]), uniform_from_bits(out[2], out[3])};
}

std::array<double, 2> SeededStream::normals(std::uint64_t index, StreamTag tag) const {
  const auto u = uniforms(index, tag);
  return {normal_quantile(u[0]), normal_quantile(u[1])};
}

void ChannelModel::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("channel.eta must lie in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("channel.tau must lie in (0, 1]");
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("channel.u must be nonnegative");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("channel.t must be nonnegative");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("channel.mu must be positive");
}

double ChannelModel::noise_variance() const {
  const double excess = referral == NoiseReferral::ChannelInput ? tau * eta * u : u;
  return 1.0 + excess + t;
}

double ChannelModel::expected_y() const { return tau * eta * mu + noise_variance(); }

double ChannelModel::expected_z() const { return std::sqrt(tau * eta) * mu; }

QuadratureDataset generate_symbols(std::uint64_t n, const ChannelModel& model,
                                   const SymbolOptions& options, const SeededStream& stream) {
  model.validate();
  QuadratureDataset data;
  data.resize(n);

  const Quantizer tx_grid(options.tx_digitization, 1.0);
  const double tx_scale =
      options.digitize_tx
          ? std::sqrt(model.mu / quantized_unit_variance(options.tx_digitization))
          : std::sqrt(model.mu);
  const Quantizer rx_grid(options.rx_digitization, std::sqrt(model.expected_y()));
  const double gain = std::sqrt(model.tau * model.eta);
  const double noise_sd = std::sqrt(model.noise_variance());

  for (std::uint64_t i = 0; i < n; ++i) {
    auto x = stream.normals(i, StreamTag::Modulation);
    if (options.digitize_tx) {
      x[0] = tx_grid.quantize(x[0]);
      x[1] = tx_grid.quantize(x[1]);
    }
    const double tq = tx_scale * x[0];
    const double tp = tx_scale * x[1];
    const auto w = stream.normals(i, StreamTag::ChannelNoise);
    double rq = gain * tq + noise_sd * w[0];
    double rp = gain * tp + noise_sd * w[1];
    if (options.digitize_rx) {
      rq = rx_grid.quantize(rq);
      rp = rx_grid.quantize(rp);
    }
    data.tx_q[i] = tq;
    data.tx_p[i] = tp;
    data.rx_q[i] = rq;
    data.rx_p[i] = rp;
  }
  return data;
}

CalibrationData generate_calibration(std::uint64_t m, double t_true, const SeededStream& stream) {
  if (!(t_true >= 0.0) || !std::isfinite(t_true)) {
    throw DomainError("calibration trusted noise must be nonnegative");
  }
  CalibrationData out;
  out.vacuum.q.resize(m);
  out.vacuum.p.resize(m);
  out.electronic.q.resize(m);
  out.electronic.p.resize(m);
  const double sd_vac = std::sqrt(1.0 + t_true);
  const double sd_elec = std::sqrt(t_true);
  for (std::uint64_t i = 0; i < m; ++i) {
    const auto v = stream.normals(i, StreamTag::Vacuum);
    const auto e = stream.normals(i, StreamTag::Electronic);
    out.vacuum.q[i] = sd_vac * v[0];
    out.vacuum.p[i] = sd_vac * v[1];
    out.electronic.q[i] = sd_elec * e[0];
    out.electronic.p[i] = sd_elec * e[1];
  }
  return out;
}

SplitStatistics orthogonal_split_trial(std::uint64_t n, const SeededStream& stream, double rho) {
  if (n < 2) throw DomainError("orthogonal_split_trial: n must be at least 2");
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("orthogonal_split_trial: |rho| <= 1");
  const double rest = std::sqrt(1.0 - rho * rho);
  SplitStatistics s{0.0, 0.0, 0.0, 0.0, 0.0};
  // Coordinates 2k and 2k + 1 come from pair k; the first n coordinates
  // form the first half.
  for (std::uint64_t k = 0; k < n; ++k) {
    const auto x = stream.normals(k, StreamTag::SplitX);
    const auto w = stream.normals(k, StreamTag::SplitY);
    for (int j = 0; j < 2; ++j) {
      const double xi = x[j];
      const double yi = rho * xi + rest * w[j];
      const bool first = 2 * k + j < n;
      s.x_norm_sq += xi * xi;
      s.y_norm_sq += yi * yi;
      if (first) {
        s.x1_norm_sq += xi * xi;
        s.xy1 += xi * yi;
      } else {
        s.xy2 += xi * yi;
      }
    }
  }
  return s;
}

}  // namespace cvqkd
