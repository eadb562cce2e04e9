#pragma once

// Holevo information from truncated Fock-space pure states.
//
// Modes: A and B0 share a two-mode squeezed vacuum of mean photon number mu.
// B0 meets Eve's mode E1 on a beamsplitter of transmissivity eta, E1 being
// one arm of a two-mode squeezed vacuum (E1, E2) of mean photon number
// eta u / (1 - eta). The receiver mixes B with G, one arm of a two-mode
// squeezed vacuum (F, G) of mean photon number t / (1 - tau), on a
// beamsplitter of transmissivity tau, and heterodynes B. Conditional
// entropies use the vacuum outcome. The global state is pure, so
//   S(AB) = S(E1 E2),  S(AFG | y) = S(E1 E2 | y),
// and both come from a Gram matrix over Eve's modes.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct FockCutoffs {
  int a = 40;    // A and B0
  int env = 8;   // E1, E2
  int det = 12;  // F, G
};

inline std::vector<double> tmsv_amplitudes(double mean_photons, int cutoff) {
  std::vector<double> c(static_cast<std::size_t>(cutoff), 0.0);
  if (mean_photons <= 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double r = mean_photons / (mean_photons + 1.0);
  for (int n = 0; n < cutoff; ++n) c[n] = std::sqrt(std::pow(r, n) / (mean_photons + 1.0));
  return c;
}

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

/// <p, q | U | k, l> for the beamsplitter
/// b'^dag = sqrt(T) b^dag - sqrt(1 - T) e^dag, e'^dag = sqrt(1 - T) b^dag + sqrt(T) e^dag
/// acting on |k>_b |l>_e. Zero unless p + q = k + l.
inline double beamsplitter_element(int p, int q, int k, int l, double transmissivity) {
  if (p + q != k + l) return 0.0;
  const double st = std::sqrt(transmissivity);
  const double sr = std::sqrt(1.0 - transmissivity);
  double sum = 0.0;
  // (st b - sr e)^k (sr b + st e)^l: choose i b's from the first, j from the second.
  for (int i = 0; i <= k; ++i) {
    const int j = p - i;
    if (j < 0 || j > l) continue;
    const double log_mag = log_factorial(k) - log_factorial(i) - log_factorial(k - i) +
                           log_factorial(l) - log_factorial(j) - log_factorial(l - j);
    double term = std::exp(log_mag);
    term *= std::pow(st, i) * std::pow(sr, k - i) * std::pow(sr, j) * std::pow(st, l - j);
    if ((k - i) % 2 == 1) term = -term;
    sum += term;
  }
  return sum * std::exp(0.5 * (log_factorial(p) + log_factorial(q) - log_factorial(k) -
                               log_factorial(l)));
}

inline double entropy_bits_of_gram(const Eigen::MatrixXd& gram) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram / gram.trace());
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-300) s -= p * std::log2(p);
  }
  return s;
}

struct FockHolevo {
  double s_ab;
  double s_cond;
  double chi;
};

inline FockHolevo fock_holevo(double mu, double eta, double u, double tau, double t,
                              FockCutoffs cut = {}) {
  const int na = cut.a;
  const int ne = cut.env;
  const int nb = na + ne;  // B and E1 after the channel
  const auto ab = tmsv_amplitudes(mu, na);
  const auto ee = tmsv_amplitudes(eta < 1.0 ? eta * u / (1.0 - eta) : 0.0, ne);

  // psi[a][b][e1][e2] after the channel; B0 = a, E1 = l, E2 = l.
  auto idx = [&](int a, int b, int e1, int e2) {
    return ((static_cast<std::size_t>(a) * nb + b) * nb + e1) * ne + e2;
  };
  std::vector<double> psi(static_cast<std::size_t>(na) * nb * nb * ne, 0.0);
  for (int a = 0; a < na; ++a) {
    for (int l = 0; l < ne; ++l) {
      const double amp = ab[a] * ee[l];
      if (amp == 0.0) continue;
      for (int p = 0; p <= a + l; ++p) {
        const int q = a + l - p;
        if (p >= nb || q >= nb) continue;
        psi[idx(a, p, q, l)] += amp * beamsplitter_element(p, q, a, l, eta);
      }
    }
  }

  const int n_eve = nb * ne;
  Eigen::MatrixXd gram_ab = Eigen::MatrixXd::Zero(n_eve, n_eve);
  {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(na) * nb, n_eve);
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b)
        for (int e1 = 0; e1 < nb; ++e1)
          for (int e2 = 0; e2 < ne; ++e2) rows(a * nb + b, e1 * ne + e2) = psi[idx(a, b, e1, e2)];
    gram_ab = rows.transpose() * rows;
  }
  const double s_ab = entropy_bits_of_gram(gram_ab);

  // Receiver: B_out = sqrt(tau) B + sqrt(1 - tau) G, project B_out on vacuum.
  // Only the G_out = b + j term survives, amplitude <m, 0 | U | j, b>.
  const int nd = cut.det;
  const auto fg = tmsv_amplitudes(tau < 1.0 ? t / (1.0 - tau) : 0.0, nd);
  const int nm = nb + nd;
  // phi[(a, f, m)][(e1, e2)]
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(na) * nd * nm, n_eve);
  for (int a = 0; a < na; ++a) {
    for (int f = 0; f < nd; ++f) {
      const int j = f;  // G photons equal F photons
      for (int b = 0; b < nb; ++b) {
        const int m = b + j;
        // Mode order (G, B) -> (G_out, B_out); B reaches B_out with amplitude sqrt(tau).
        const double coef = fg[f] * beamsplitter_element(m, 0, j, b, tau);
        if (coef == 0.0) continue;
        const Eigen::Index row = (static_cast<Eigen::Index>(a) * nd + f) * nm + m;
        for (int e1 = 0; e1 < nb; ++e1)
          for (int e2 = 0; e2 < ne; ++e2) phi(row, e1 * ne + e2) += coef * psi[idx(a, b, e1, e2)];
      }
    }
  }
  const Eigen::MatrixXd gram_c = phi.transpose() * phi;
  const double s_cond = entropy_bits_of_gram(gram_c);
  return {s_ab, s_cond, s_ab - s_cond};
}

}  // namespace oracle
