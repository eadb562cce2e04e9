#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "cvqkd/error.hpp"
#include "cvqkd/gaussian_state.hpp"
#include "oracles/fock_holevo.hpp"

using namespace cvqkd;

namespace {

// Thermal state entropy from its photon-number distribution.
double thermal_entropy_bits(double mean_photons) {
  double s = 0.0;
  const double r = mean_photons / (1.0 + mean_photons);
  for (int k = 0; k < 4000; ++k) {
    const double p = std::pow(r, k) / (1.0 + mean_photons);
    if (p < 1e-300) break;
    s -= p * std::log2(p);
  }
  return s;
}

}  // namespace

TEST_SUITE("gaussian_state") {
  TEST_CASE("g matches the thermal photon-number entropy") {
    CHECK(g_function(1.0) == 0.0);
    for (const double nu : {1.001, 1.5, 3.9, 20.0}) {
      CAPTURE(nu);
      CHECK(g_function(nu) == doctest::Approx(thermal_entropy_bits((nu - 1.0) / 2.0)).epsilon(1e-12));
    }
    CHECK(g_function(1.0 - 5e-10) == 0.0);
    CHECK_THROWS_AS(g_function(0.9), DomainError);
  }

  TEST_CASE("symplectic eigenvalues of simple states") {
    const Eigen::Matrix2d thermal = 3.0 * Eigen::Matrix2d::Identity();
    CHECK(symplectic_eigenvalues(thermal)[0] == doctest::Approx(3.0));
    // Squeezed vacuum is pure.
    Eigen::Matrix2d sq;
    sq << 4.0, 0.0, 0.0, 0.25;
    CHECK(symplectic_eigenvalues(sq)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(sq) == doctest::Approx(0.0).scale(1.0));
    // Two-mode squeezed vacuum is pure.
    const auto tmsv = channel_covariance(2.0, 1.0, 0.0);
    const auto nu = symplectic_eigenvalues(tmsv);
    CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(nu[1] == doctest::Approx(1.0).epsilon(1e-10));
    Eigen::Matrix2d bad;
    bad << 0.5, 0.0, 0.0, 0.5;
    CHECK_THROWS_AS(von_neumann_entropy(bad), NumericalError);
    Eigen::Matrix2d indefinite;
    indefinite << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(symplectic_eigenvalues(indefinite), NumericalError);
  }

  TEST_CASE("channel covariance entries") {
    const auto v = channel_covariance(1.45, 0.35, 6.3e-3);
    const double a = 2 * 1.45 + 1;
    CHECK(v(0, 0) == doctest::Approx(a));
    CHECK(v(2, 2) == doctest::Approx(2 * 0.35 * 1.45 + 1 + 2 * 0.35 * 6.3e-3));
    CHECK(v(0, 2) == doctest::Approx(std::sqrt(0.35 * (a * a - 1))));
    CHECK(v(1, 3) == doctest::Approx(-std::sqrt(0.35 * (a * a - 1))));
  }

  TEST_CASE("Holevo bound limiting cases") {
    CHECK(holevo_bound(1.45, 1.0, 0.0, 1.0, 0.0) <= 1e-9);
    CHECK(holevo_bound(0.0, 0.35, 0.0, 0.69, 25.71e-3) <= 1e-9);
    for (const double eta : {0.1, 0.35, 0.8}) {
      for (const double u : {0.0, 0.01, 0.1}) {
        CHECK(holevo_bound(1.45, eta, u, 1.0, 0.0) ==
              doctest::Approx(holevo_bound_ideal_receiver(1.45, eta, u)).epsilon(1e-9));
      }
    }
    CHECK_THROWS_AS(holevo_bound(1.45, 0.35, 0.0, 1.0, 0.01), DomainError);
  }

  TEST_CASE("Holevo bound is increasing in u and decreasing in trusted efficiency loss") {
    double prev = -1.0;
    for (int i = 0; i < 10; ++i) {
      const double chi = holevo_bound(1.45, 0.35, 0.005 * i, 0.69, 25.71e-3);
      CHECK(chi > prev);
      prev = chi;
    }
    // Trusting more of the loss leaves Eve less.
    CHECK(holevo_bound(1.45, 0.35, 6.3e-3, 0.69, 0.0) <
          holevo_bound(1.45, 0.35, 6.3e-3, 1.0, 0.0));
  }

  TEST_CASE("Holevo terms agree with the Fock-space oracle") {
    struct P {
      double mu, eta, u, tau, t;
    };
    for (const auto p : {P{1.45, 0.35, 6.3e-3, 0.69, 25.71e-3}, P{1.45, 0.5, 0.02, 0.8, 0.01},
                         P{0.8, 0.9, 0.0, 1.0, 0.0}}) {
      const auto ref = oracle::fock_holevo(p.mu, p.eta, p.u, p.tau, p.t);
      const auto h = holevo_terms(p.mu, p.eta, p.u, p.tau, p.t);
      CAPTURE(p.eta);
      CHECK(h.s_e == doctest::Approx(ref.s_ab).epsilon(1e-6));
      CHECK(h.s_e_given_y == doctest::Approx(ref.s_cond).epsilon(1e-6));
      CHECK(std::abs(h.chi - ref.chi) < 1e-6);
    }
  }

  TEST_CASE("Holevo bound at the reference operating point") {
    // Frozen from the Fock-space oracle at cutoff 40.
    CHECK(holevo_bound(1.45, 0.35, 6.3e-3, 0.69, 25.71e-3) ==
          doctest::Approx(0.2940691254).epsilon(1e-7));
  }
}
