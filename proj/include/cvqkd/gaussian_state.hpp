#pragma once

// Gaussian-state entropies and the Holevo bound for reverse reconciliation
// with a trusted heterodyne receiver.
//
// Covariance matrices are in shot-noise units (vacuum = identity) with the
// quadrature ordering (q1, p1, q2, p2, ...).
//
// Entangling-cloner picture: Alice's two-mode squeezed state
//   [[a I, c Z], [c Z, b I]],  a = 2 mu + 1,  b = 2 eta mu + 1 + 2 eta u,
//   c = sqrt(eta (a^2 - 1)),
// is purified by Eve, so S(E) = S(AB). The receiver's inefficiency tau and
// electronic noise t are modeled by a beamsplitter of transmissivity tau
// mixing Bob's mode with one arm of a two-mode squeezed state of variance
// v = 1 + 2 t / (1 - tau). Conditioned on Bob's heterodyne outcome the
// remaining modes (A, detector modes) purify Eve, so
//   chi = S(AB) - S(A F G | y).

#include <Eigen/Dense>

namespace cvqkd {

/// Bosonic entropy g(nu) in bits; nu below 1 (within 1e-9) counts as 1.
double g_function(double nu);

/// Symplectic eigenvalues (one per mode, ascending) of a 2N x 2N
/// covariance matrix. Throws NumericalError if V is not positive definite.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v);

/// Von Neumann entropy in bits. Throws NumericalError when a symplectic
/// eigenvalue is below 1 - 1e-6.
double von_neumann_entropy(const Eigen::MatrixXd& v);

/// Two-mode covariance matrix shared by Alice and Bob after the channel.
Eigen::Matrix4d channel_covariance(double mu, double eta, double u);

struct HolevoTerms {
  double s_e;           // S(E) = S(AB)
  double s_e_given_y;   // S(E | y)
  double chi;           // clamped to >= 0
};

/// Holevo bound in bits per complex symbol, trusted receiver (tau, t).
/// tau == 1 requires t == 0.
HolevoTerms holevo_terms(double mu, double eta, double u, double tau, double t);
double holevo_bound(double mu, double eta, double u, double tau, double t);

/// Closed form for an untrusted ideal heterodyne receiver:
/// chi = g(nu1) + g(nu2) - g(a - c^2 / (b + 1)).
double holevo_bound_ideal_receiver(double mu, double eta, double u);

}  // namespace cvqkd
