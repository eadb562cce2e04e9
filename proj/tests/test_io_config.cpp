#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "cvqkd/config.hpp"
#include "cvqkd/dataset_io.hpp"
#include "cvqkd/error.hpp"
#include "cvqkd/simulator.hpp"

using namespace cvqkd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cvqkd_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

void patch_byte(const fs::path& p, std::size_t offset, unsigned char value) {
  std::fstream f(p, std::ios::binary | std::ios::in | std::ios::out);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(static_cast<char>(value));
}

}  // namespace

TEST_SUITE("dataset_io") {
  TEST_CASE("symbol files round trip") {
    const auto data = generate_symbols(1000, ChannelModel{}, SymbolOptions{}, SeededStream{1, 0});
    const auto path = scratch("roundtrip.bin");
    write_symbols(path, data, kFlagTxDigitized);
    CHECK(fs::file_size(path) == 32 + 1000 * 32);
    DatasetHeader h;
    const auto back = read_symbols(path, &h);
    CHECK(h.kind == DatasetKind::Symbols);
    CHECK(h.flags == kFlagTxDigitized);
    CHECK(h.records == 1000);
    CHECK(back.tx_q == data.tx_q);
    CHECK(back.rx_p == data.rx_p);
  }

  TEST_CASE("header layout is little-endian") {
    QuadratureDataset d;
    d.resize(1);
    d.tx_q[0] = 1.0;
    const auto path = scratch("layout.bin");
    write_symbols(path, d, 3);
    std::ifstream f(path, std::ios::binary);
    unsigned char head[40];
    f.read(reinterpret_cast<char*>(head), 40);
    CHECK(std::string(reinterpret_cast<char*>(head), 8) == "CVQKDSYM");
    CHECK(head[8] == 1);
    CHECK(head[12] == 3);
    CHECK(head[16] == 1);
    CHECK(head[24] == 0);
    // 1.0 = 0x3FF0000000000000
    CHECK(head[38] == 0xF0);
    CHECK(head[39] == 0x3F);
  }

  TEST_CASE("calibration files round trip") {
    const auto cal = generate_calibration(500, 0.02, SeededStream{2, 0});
    const auto path = scratch("cal.bin");
    write_calibration(path, cal.vacuum);
    const auto back = read_calibration(path);
    CHECK(back.q == cal.vacuum.q);
    CHECK(read_header(path).kind == DatasetKind::Calibration);
    CHECK_THROWS_AS(read_symbols(path), FormatError);
  }

  TEST_CASE("corrupted files are rejected with the path in the message") {
    const auto data = generate_symbols(10, ChannelModel{}, SymbolOptions{}, SeededStream{1, 0});
    const auto path = scratch("corrupt.bin");
    auto expect_error = [&](const char* what) {
      CAPTURE(what);
      try {
        read_symbols(path);
        FAIL("no error");
      } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find(path.string()) != std::string::npos);
      }
    };
    write_symbols(path, data, 0);
    patch_byte(path, 0, 'X');
    expect_error("magic");
    write_symbols(path, data, 0);
    patch_byte(path, 8, 2);
    expect_error("version");
    write_symbols(path, data, 0);
    patch_byte(path, 12, 0x80);
    expect_error("flags");
    write_symbols(path, data, 0);
    patch_byte(path, 16, 11);
    expect_error("record count");
    write_symbols(path, data, 0);
    patch_byte(path, 30, 1);
    expect_error("reserved");
    write_symbols(path, data, 0);
    fs::resize_file(path, 20);
    expect_error("short");
    CHECK_THROWS_AS(read_symbols(scratch("missing.bin")), FormatError);
  }

  TEST_CASE("non-finite payload is rejected") {
    QuadratureDataset d;
    d.resize(2);
    const auto path = scratch("nan.bin");
    write_symbols(path, d, 0);
    // rx_p of record 1: offset 32 + 32 + 24, set exponent bits to all ones
    patch_byte(path, 32 + 32 + 24 + 7, 0x7F);
    patch_byte(path, 32 + 32 + 24 + 6, 0xF8);
    CHECK_THROWS_AS(read_symbols(path), FormatError);
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults are the reference profile") {
    const auto c = default_config();
    CHECK(c.profile == "paper-table1");
    CHECK(c.channel.mu == 1.45);
    CHECK(c.channel.eta == 0.35);
    CHECK(c.channel.u == 6.3e-3);
    CHECK(c.channel.tau == 0.69);
    CHECK(c.channel.t == 25.71e-3);
    CHECK(c.ir.fer == 0.0036);
    CHECK(c.ir.beta == 0.916);
    CHECK(c.budget.eps_pe == 1e-10);
    CHECK(c.budget.eps_ir == 1e-12);
    CHECK(c.budget.eps_qrng == 2e-6);
    CHECK(c.digitization.bits == 6);
    CHECK(c.blocks == 25);
    CHECK(c.symbol_rate == 1e8);
    c.validate();
  }

  TEST_CASE("parsing, comments and overrides") {
    RunConfig c = default_config();
    parse_config_text(c,
                      "# comment\n"
                      "channel.u = 0.01   # trailing\n"
                      "\n"
                      "estimation.method = gaussian\n"
                      "run.n_total = 1e6\n",
                      "inline");
    CHECK(c.channel.u == 0.01);
    CHECK(c.method == IntervalMethod::GaussianAssumption);
    CHECK(c.n_total == 1000000);
    apply_override(c, "ir.leak_mode=fixed");
    apply_override(c, "ir.leak_bits = 1.6e9");
    apply_override(c, "estimation.chi_override=0");
    CHECK(c.ir.leak_mode == LeakMode::Fixed);
    CHECK(c.ir.leak_bits == 1.6e9);
    REQUIRE(c.chi_override.has_value());
    CHECK(*c.chi_override == 0.0);
    apply_override(c, "estimation.chi_override=none");
    CHECK_FALSE(c.chi_override.has_value());
    apply_override(c, "run.seed=18446744073709551615");
    CHECK(c.seed == 18446744073709551615ull);
  }

  TEST_CASE("config errors") {
    RunConfig c = default_config();
    CHECK_THROWS_AS(apply_override(c, "channel.nope=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "channel.u"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "channel.u=abc"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "run.blocks=2.5"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "digitization.digitize_tx=maybe"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "estimation.method=student"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(c, "channel.u 0.1\n", "x"), ConfigError);
    try {
      parse_config_text(c, "\n\nbogus.key = 1\n", "file.cfg");
      FAIL("no error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("file.cfg:3") != std::string::npos);
    }
    RunConfig bad = default_config();
    bad.n_total = 1000001;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = default_config();
    bad.channel.tau = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("does-not-exist.cfg")), ConfigError);
  }

  TEST_CASE("resolved config JSON") {
    const auto j = to_json(default_config());
    CHECK(j["profile"] == "paper-table1");
    CHECK(j["channel"]["noise_referral"] == "input");
    CHECK(j["estimation"]["method"] == "beta");
    CHECK(j["estimation"]["chi_override"] == "none");
    CHECK(j["budget"]["eps_h"] == 1e-10);
    CHECK(j["run"]["n_total"] == 10000000);
  }

  TEST_CASE("config file loading") {
    const auto path = scratch("run.cfg");
    {
      std::ofstream f(path);
      f << "run.blocks = 5\nrun.n_total = 100000\n";
    }
    const auto c = load_config(path);
    CHECK(c.blocks == 5);
    CHECK(c.block_size() == 20000);
  }
}
