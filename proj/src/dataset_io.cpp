#include "cvqkd/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "cvqkd/error.hpp"

namespace cvqkd {
namespace {

constexpr std::size_t kHeaderSize = 32;
constexpr char kMagicSymbols[8] = {'C', 'V', 'Q', 'K', 'D', 'S', 'Y', 'M'};
constexpr char kMagicCalibration[8] = {'C', 'V', 'Q', 'K', 'D', 'C', 'A', 'L'};

void put_u32(unsigned char* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

void put_u64(unsigned char* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_f64(unsigned char* p, double d) { put_u64(p, std::bit_cast<std::uint64_t>(d)); }

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

std::string where(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

std::array<unsigned char, kHeaderSize> encode_header(const DatasetHeader& h) {
  std::array<unsigned char, kHeaderSize> out{};
  const char* magic = h.kind == DatasetKind::Symbols ? kMagicSymbols : kMagicCalibration;
  std::memcpy(out.data(), magic, 8);
  put_u32(out.data() + 8, h.version);
  put_u32(out.data() + 12, h.flags);
  put_u64(out.data() + 16, h.records);
  put_u64(out.data() + 24, 0);
  return out;
}

std::size_t record_width(DatasetKind kind) { return kind == DatasetKind::Symbols ? 4 : 2; }

void write_records(const std::filesystem::path& path, const DatasetHeader& header,
                   const std::vector<const std::vector<double>*>& columns) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + where(path) + " for writing");
  const auto head = encode_header(header);
  out.write(reinterpret_cast<const char*>(head.data()), head.size());

  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t width = columns.size();
  std::vector<unsigned char> buf(kChunk * width * 8);
  for (std::uint64_t start = 0; start < header.records; start += kChunk) {
    const std::size_t count =
        static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, header.records - start));
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t c = 0; c < width; ++c) {
        put_f64(buf.data() + (i * width + c) * 8, (*columns[c])[start + i]);
      }
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(count * width * 8));
  }
  out.flush();
  if (!out) throw FormatError("write failed for " + where(path));
}

std::vector<double> read_payload(const std::filesystem::path& path, DatasetHeader& header,
                                 DatasetKind expected) {
  header = read_header(path);
  if (header.kind != expected) {
    throw FormatError(where(path) + " holds " +
                      (header.kind == DatasetKind::Symbols ? "symbol" : "calibration") +
                      " records, expected the other kind");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + where(path));
  in.seekg(kHeaderSize);
  const std::size_t values = header.records * record_width(header.kind);
  std::vector<unsigned char> raw(values * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw FormatError("truncated payload in " + where(path));
  std::vector<double> out(values);
  for (std::size_t i = 0; i < values; ++i) out[i] = get_f64(raw.data() + 8 * i);
  return out;
}

}  // namespace

void write_symbols(const std::filesystem::path& path, const QuadratureDataset& data,
                   std::uint32_t flags) {
  data.validate();
  DatasetHeader h;
  h.kind = DatasetKind::Symbols;
  h.flags = flags;
  h.records = data.size();
  write_records(path, h, {&data.tx_q, &data.tx_p, &data.rx_q, &data.rx_p});
}

void write_calibration(const std::filesystem::path& path, const ReceiverSamples& samples) {
  if (samples.q.size() != samples.p.size()) {
    throw FormatError("calibration arrays differ in length for " + where(path));
  }
  DatasetHeader h;
  h.kind = DatasetKind::Calibration;
  h.records = samples.size();
  write_records(path, h, {&samples.q, &samples.p});
}

DatasetHeader read_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + where(path));
  std::array<unsigned char, kHeaderSize> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  if (in.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
    throw FormatError("file too short for a dataset header: " + where(path));
  }
  DatasetHeader h;
  if (std::memcmp(head.data(), kMagicSymbols, 8) == 0) {
    h.kind = DatasetKind::Symbols;
  } else if (std::memcmp(head.data(), kMagicCalibration, 8) == 0) {
    h.kind = DatasetKind::Calibration;
  } else {
    throw FormatError("bad magic in " + where(path));
  }
  h.version = get_u32(head.data() + 8);
  if (h.version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(h.version) + " in " +
                      where(path));
  }
  h.flags = get_u32(head.data() + 12);
  if ((h.flags & ~(kFlagTxDigitized | kFlagRxDigitized)) != 0) {
    throw FormatError("unknown flag bits in " + where(path));
  }
  h.records = get_u64(head.data() + 16);
  if (get_u64(head.data() + 24) != 0) {
    throw FormatError("nonzero reserved header field in " + where(path));
  }
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw FormatError("cannot stat " + where(path));
  const std::uint64_t width = record_width(h.kind) * 8;
  if (h.records > (size - kHeaderSize) / width ||
      size != kHeaderSize + h.records * width) {
    throw FormatError("record count does not match file size in " + where(path));
  }
  return h;
}

QuadratureDataset read_symbols(const std::filesystem::path& path, DatasetHeader* header) {
  DatasetHeader h;
  const auto values = read_payload(path, h, DatasetKind::Symbols);
  QuadratureDataset data;
  data.resize(h.records);
  for (std::size_t i = 0; i < h.records; ++i) {
    data.tx_q[i] = values[4 * i];
    data.tx_p[i] = values[4 * i + 1];
    data.rx_q[i] = values[4 * i + 2];
    data.rx_p[i] = values[4 * i + 3];
  }
  try {
    data.validate();
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " in " + where(path));
  }
  if (header != nullptr) *header = h;
  return data;
}

ReceiverSamples read_calibration(const std::filesystem::path& path) {
  DatasetHeader h;
  const auto values = read_payload(path, h, DatasetKind::Calibration);
  ReceiverSamples s;
  s.q.resize(h.records);
  s.p.resize(h.records);
  for (std::size_t i = 0; i < h.records; ++i) {
    s.q[i] = values[2 * i];
    s.p[i] = values[2 * i + 1];
    if (!std::isfinite(s.q[i]) || !std::isfinite(s.p[i])) {
      throw FormatError("non-finite calibration value in " + where(path));
    }
  }
  return s;
}

}  // namespace cvqkd
