#include <doctest.h>

#include <cmath>

#include "cvqkd/error.hpp"
#include "cvqkd/security.hpp"

using namespace cvqkd;

namespace {

double hand_key_bound(double n_prime, double h, double chi, double leak, double p, int d) {
  const double eps = 1e-10;
  const double ent = std::log2(n_prime) * std::sqrt(2.0 * n_prime * std::log2(2.0 / eps));
  const double delta = (p / 3.0) * eps * eps;
  const double aep = std::sqrt(n_prime) * 4.0 * (d + 1) * std::sqrt(std::log2(2.0 / (delta * delta)));
  return n_prime * (h - chi) - leak - ent - aep + std::log2(p - delta) +
         2.0 * std::log2(std::sqrt(2.0) * eps);
}

}  // namespace

TEST_SUITE("security") {
  TEST_CASE("budget defaults and validation") {
    SecurityBudget b;
    CHECK(total_epsilon(b) == doctest::Approx(5e-10 + 1e-12 + 2e-6));
    b.validate();
    b.eps_h = 0.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    SecurityBudget big;
    big.eps_qrng = 0.6;
    big.eps_ir = 0.5;
    CHECK_THROWS_AS(big.validate(), ConfigError);
  }

  TEST_CASE("AEP penalty forms") {
    CHECK(aep_penalty(1e-10, 6) ==
          doctest::Approx(28.0 * std::sqrt(std::log2(2.0 / 1e-20))).epsilon(1e-14));
    for (const double delta : {1e-12, 1e-6, 0.1}) {
      for (int d = 2; d <= 16; ++d) CHECK(aep_penalty(delta, d) >= aep_penalty_exact(delta, d));
    }
    const double delta = 1e-3;
    const double ell = -std::log2(1.0 - std::sqrt(1.0 - delta * delta));
    CHECK(aep_penalty_exact(delta, 6) ==
          doctest::Approx(4.0 * std::sqrt(ell) * std::log2(66.0)).epsilon(1e-10));
    CHECK_THROWS_AS(aep_penalty(0.0, 6), DomainError);
    CHECK_THROWS_AS(aep_penalty(1e-3, 0), DomainError);
  }

  TEST_CASE("IR projection terms") {
    const auto t = ir_projection_terms(0.9964, 1e-10);
    CHECK(t.smoothing == doctest::Approx(0.9964 / 3.0 * 1e-20));
    CHECK(t.log_correction_bits == doctest::Approx(std::log2(0.9964)).epsilon(1e-12));
    CHECK(t.log_correction_bits <= 0.0);
  }

  TEST_CASE("synthetic key length against a hand sum") {
    IrOutcome ir{0.9964, 1e9, 5e8, 0.916};
    const SecurityBudget b;
    const double bound = key_length_bound(ir, 4.0, 3.0, b, 6);
    CHECK(bound == doctest::Approx(hand_key_bound(1e9, 4.0, 3.0, 5e8, 0.9964, 6)).epsilon(1e-13));
    EntropyEstimate e;
    e.h_hat = 4.0;
    e.n_prime = 1e9;
    const auto r = key_length(ir, e, 3.0, b, 6, {0.3, 0.01});
    CHECK(r.key_length == std::floor(bound));
    CHECK(r.skf == doctest::Approx(r.key_length / 1e9));
    CHECK(r.key_length_bound ==
          doctest::Approx(r.n_prime * (r.h_hat_bits - r.holevo_bits) - r.leak_bits -
                          r.entropy_penalty_bits - r.aep_penalty_bits + r.ir_projection_bits -
                          r.hash_penalty_bits)
              .epsilon(1e-15));
    CHECK(r.hash_penalty_bits == doctest::Approx(-2.0 * std::log2(std::sqrt(2.0) * 1e-10)));
    CHECK(r.worst_case_params.eta == 0.3);
  }

  TEST_CASE("key length floors at zero") {
    IrOutcome ir{1.0, 1e6, 0.0, 1.0};
    EntropyEstimate e;
    e.h_hat = 2.0;
    e.n_prime = 1e6;
    const auto r = key_length(ir, e, 2.0, SecurityBudget{}, 6);
    CHECK(r.key_length_bound < 0.0);
    CHECK(r.key_length == 0.0);
    CHECK(r.skf == 0.0);
  }

  TEST_CASE("key length is monotone in its inputs") {
    const SecurityBudget b;
    IrOutcome ir{0.99, 1e8, 1e8, 0.9};
    const double base = key_length_bound(ir, 3.0, 1.0, b, 6);
    CHECK(key_length_bound(ir, 3.0, 1.1, b, 6) < base);
    IrOutcome more_leak = ir;
    more_leak.leak_bits = 1.1e8;
    CHECK(key_length_bound(more_leak, 3.0, 1.0, b, 6) < base);
    SecurityBudget tight = b;
    tight.eps_ent = 1e-20;
    CHECK(key_length_bound(ir, 3.0, 1.0, tight, 6) < base);
    CHECK(key_length_bound(ir, 3.0, 1.0, b, 8) < base);
    IrOutcome longer = ir;
    longer.n_prime = 2e8;
    longer.leak_bits = 2e8;
    CHECK(key_length_bound(longer, 3.0, 1.0, b, 6) > base);
  }

  TEST_CASE("leak model and SNR") {
    CHECK(leak_from_efficiency(1e6, 10.0, 0.9, 1.0) == doctest::Approx(1e6 * (10.0 - 0.9)));
    MomentEstimates m{1.0, 2.0, 1.0, 100};
    CHECK(snr_from_moments(m) == doctest::Approx(1.0));
    CHECK_THROWS_AS(leak_from_efficiency(1e6, 10.0, 1.2, 1.0), DomainError);
    MomentEstimates noiseless{1.0, 1.0, 1.0, 100};
    CHECK_THROWS_AS(snr_from_moments(noiseless), NumericalError);
  }

  TEST_CASE("invalid key-length inputs") {
    IrOutcome ir{0.99, 1e6, -1.0, 0.9};
    EntropyEstimate e;
    e.h_hat = 2.0;
    e.n_prime = 1e6;
    CHECK_THROWS_AS(key_length(ir, e, 0.1, SecurityBudget{}, 6), DomainError);
    ir.leak_bits = 0.0;
    CHECK_THROWS_AS(key_length(ir, e, -0.1, SecurityBudget{}, 6), DomainError);
  }

  TEST_CASE("report JSON lists every term") {
    IrOutcome ir{0.9964, 1e9, 5e8, 0.916};
    EntropyEstimate e;
    e.h_hat = 4.0;
    e.n_prime = 1e9;
    const auto j = to_json(key_length(ir, e, 3.0, SecurityBudget{}, 6));
    for (const char* key : {"n_prime", "h_hat_bits", "holevo_bits", "leak_bits",
                            "entropy_penalty_bits", "aep_penalty_bits", "ir_projection_bits",
                            "hash_penalty_bits", "key_length_bound", "key_length", "skf"}) {
      CHECK(j.contains(key));
    }
  }
}
