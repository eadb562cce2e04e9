#pragma once

// Binary dataset files.
//
// Header, 32 bytes little-endian:
//   [0, 8)   magic  "CVQKDSYM" (symbol records) or "CVQKDCAL" (calibration)
//   [8, 12)  u32 version = 1
//   [12, 16) u32 flags: bit 0 tx digitized, bit 1 rx digitized
//   [16, 24) u64 record count
//   [24, 32) u64 reserved = 0
// Records, IEEE-754 binary64 little-endian:
//   symbols:     (q_tx, p_tx, q_rx, p_rx)
//   calibration: (q_rx, p_rx)

#include <cstdint>
#include <filesystem>

#include "cvqkd/estimation.hpp"

namespace cvqkd {

inline constexpr std::uint32_t kDatasetVersion = 1;
inline constexpr std::uint32_t kFlagTxDigitized = 1u << 0;
inline constexpr std::uint32_t kFlagRxDigitized = 1u << 1;

enum class DatasetKind { Symbols, Calibration };

struct DatasetHeader {
  DatasetKind kind = DatasetKind::Symbols;
  std::uint32_t version = kDatasetVersion;
  std::uint32_t flags = 0;
  std::uint64_t records = 0;
};

/// Writes are all-or-nothing from the caller's point of view: failures
/// throw FormatError naming the path.
void write_symbols(const std::filesystem::path& path, const QuadratureDataset& data,
                   std::uint32_t flags);
void write_calibration(const std::filesystem::path& path, const ReceiverSamples& samples);

/// Reads and validates magic, version, reserved field and file size.
DatasetHeader read_header(const std::filesystem::path& path);
QuadratureDataset read_symbols(const std::filesystem::path& path,
                               DatasetHeader* header = nullptr);
ReceiverSamples read_calibration(const std::filesystem::path& path);

}  // namespace cvqkd
