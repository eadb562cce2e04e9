#include "cvqkd/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvqkd/error.hpp"

namespace cvqkd {
namespace {

constexpr double kPhysicalSlack = 1e-6;

Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

void check_channel_args(double mu, double eta, double u) {
  if (!(mu >= 0.0) || !(eta >= 0.0 && eta <= 1.0) || !(u >= 0.0) || !std::isfinite(mu) ||
      !std::isfinite(u)) {
    throw DomainError("channel parameters out of range: mu >= 0, eta in [0, 1], u >= 0");
  }
}

// Covariance matrix of modes after heterodyne detection of the last mode,
// V_R - C (V_B + I)^-1 C^T.
Eigen::MatrixXd heterodyne_condition_last(const Eigen::MatrixXd& v) {
  const Eigen::Index r = v.rows() - 2;
  const Eigen::MatrixXd vr = v.topLeftCorner(r, r);
  const Eigen::MatrixXd c = v.topRightCorner(r, 2);
  const Eigen::Matrix2d vb = v.bottomRightCorner(2, 2) + Eigen::Matrix2d::Identity();
  return vr - c * vb.inverse() * c.transpose();
}

}  // namespace

double g_function(double nu) {
  if (!(nu >= 1.0 - 1e-9) || !std::isfinite(nu)) {
    throw DomainError("g_function: symplectic eigenvalue below 1: " + std::to_string(nu));
  }
  if (nu <= 1.0) return 0.0;
  const double h = 0.5 * (nu - 1.0);
  return ((h + 1.0) * std::log1p(h) - h * std::log(h)) / std::numbers::ln2;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() == 0) {
    throw DomainError("covariance matrix must be square of even dimension");
  }
  const Eigen::Index modes = v.rows() / 2;
  const Eigen::MatrixXd sym = 0.5 * (v + v.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance matrix is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  // M = L^T Omega L is antisymmetric with eigenvalues +-i nu_k, so -M^2 is
  // symmetric with eigenvalues nu_k^2, each twice.
  const Eigen::MatrixXd m = l.transpose() * symplectic_form(modes) * l;
  const Eigen::MatrixXd m2 = -(m * m);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m2 + m2.transpose()),
                                                          Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symplectic eigenvalue solve failed");
  Eigen::VectorXd nu(modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    const double lam = 0.5 * (es.eigenvalues()(2 * k) + es.eigenvalues()(2 * k + 1));
    nu(k) = std::sqrt(std::max(lam, 0.0));
  }
  return nu;
}

double von_neumann_entropy(const Eigen::MatrixXd& v) {
  const Eigen::VectorXd nu = symplectic_eigenvalues(v);
  double s = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (nu(k) < 1.0 - kPhysicalSlack) {
      throw NumericalError("unphysical covariance matrix: symplectic eigenvalue " +
                           std::to_string(nu(k)));
    }
    s += g_function(std::max(nu(k), 1.0));
  }
  return s;
}

Eigen::Matrix4d channel_covariance(double mu, double eta, double u) {
  check_channel_args(mu, eta, u);
  const double a = 2.0 * mu + 1.0;
  const double b = 2.0 * eta * mu + 1.0 + 2.0 * eta * u;
  const double c = std::sqrt(eta * (a * a - 1.0));
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v(0, 0) = v(1, 1) = a;
  v(2, 2) = v(3, 3) = b;
  v(0, 2) = v(2, 0) = c;
  v(1, 3) = v(3, 1) = -c;
  return v;
}

HolevoTerms holevo_terms(double mu, double eta, double u, double tau, double t) {
  check_channel_args(mu, eta, u);
  if (!(tau > 0.0 && tau <= 1.0) || !(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("receiver parameters out of range: tau in (0, 1], t >= 0");
  }
  if (tau == 1.0 && t != 0.0) {
    throw DomainError("trusted noise requires tau < 1 in the detector model");
  }
  const Eigen::Matrix4d vab = channel_covariance(mu, eta, u);
  HolevoTerms out{};
  out.s_e = von_neumann_entropy(vab);

  if (tau == 1.0) {
    out.s_e_given_y = von_neumann_entropy(heterodyne_condition_last(vab));
  } else {
    // Modes (A, F, G, B) with B last so it can be conditioned directly.
    const double vd = 1.0 + 2.0 * t / (1.0 - tau);
    const double cd = std::sqrt(vd * vd - 1.0);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(8, 8);
    v.block<2, 2>(0, 0) = vab.block<2, 2>(0, 0);
    v.block<2, 2>(6, 6) = vab.block<2, 2>(2, 2);
    v.block<2, 2>(0, 6) = vab.block<2, 2>(0, 2);
    v.block<2, 2>(6, 0) = vab.block<2, 2>(2, 0);
    const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    v.block<2, 2>(2, 2) = vd * Eigen::Matrix2d::Identity();
    v.block<2, 2>(4, 4) = vd * Eigen::Matrix2d::Identity();
    v.block<2, 2>(2, 4) = cd * z;
    v.block<2, 2>(4, 2) = cd * z;
    // Beamsplitter on (G, B): B_out = sqrt(tau) B + sqrt(1 - tau) G.
    const double st = std::sqrt(tau);
    const double sr = std::sqrt(1.0 - tau);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(8, 8);
    s.block<2, 2>(4, 4) = st * Eigen::Matrix2d::Identity();
    s.block<2, 2>(4, 6) = -sr * Eigen::Matrix2d::Identity();
    s.block<2, 2>(6, 4) = sr * Eigen::Matrix2d::Identity();
    s.block<2, 2>(6, 6) = st * Eigen::Matrix2d::Identity();
    const Eigen::MatrixXd vout = s * v * s.transpose();
    out.s_e_given_y = von_neumann_entropy(heterodyne_condition_last(vout));
  }
  out.chi = std::max(0.0, out.s_e - out.s_e_given_y);
  return out;
}

double holevo_bound(double mu, double eta, double u, double tau, double t) {
  return holevo_terms(mu, eta, u, tau, t).chi;
}

double holevo_bound_ideal_receiver(double mu, double eta, double u) {
  const Eigen::Matrix4d v = channel_covariance(mu, eta, u);
  const double a = v(0, 0);
  const double b = v(2, 2);
  const double c = v(0, 2);
  const double s_e = von_neumann_entropy(v);
  const double nu3 = a - c * c / (b + 1.0);
  return std::max(0.0, s_e - g_function(std::max(nu3, 1.0)));
}

}  // namespace cvqkd
