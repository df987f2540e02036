#pragma once

// Gaussian bulk toolbox: covariance matrices of bosonic modes in the
// doubled convention Gamma_ij = <xi_i xi_j + xi_j xi_i> - 2 <xi_i><xi_j>
// with ordering (phi_1..phi_D, pi_1..pi_D), their symplectic spectra,
// per-mode entropies, mode-ranked truncation, harmonic-chain ground states,
// and the generalized-entropy assembly.
//
// Symplectic eigenvalues are defined on Gamma / 2 so the vacuum sits exactly
// at nu = 1/2. They are computed as the eigenvalues of i Omega^{-1} (Gamma/2),
// made numerically symmetric through the similarity
//   i Omega^{-1} C  ~  i C^{1/2} Omega^{-1} C^{1/2}   (Hermitian),
// which keeps the +-nu pairing exact up to roundoff; the residual pairing
// error is reported and gated.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hololab/common.hpp"

namespace hololab::bulk {

struct CovarianceMatrix {
  Eigen::MatrixXd gamma;  // 2D x 2D, (phi..., pi...) ordering

  int modes() const { return static_cast<int>(gamma.rows()) / 2; }

  void validate() const {
    if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0 ||
        gamma.rows() == 0)
      throw InvalidState("CovarianceMatrix: needs even square dimension");
    if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() >= 1e-10)
      throw InvalidState("CovarianceMatrix: symmetry violated beyond 1e-10");
  }
};

// ground state of H = 1/2 sum pi_i^2 + 1/2 phi^T K phi with
// K = tridiag(-coupling, mass0^2 + 2 coupling, -coupling), Dirichlet ends:
// Gamma_phiphi = K^{-1/2}, Gamma_pipi = K^{1/2}, Gamma_phipi = 0.
// mass0 > 0 regulates the would-be zero mode of the continuum limit.
inline CovarianceMatrix build_chain_ground_covariance(int D, double mass0,
                                                      double coupling) {
  if (D < 1) throw std::invalid_argument("chain: D >= 1");
  if (!(mass0 > 0.0) || !(coupling > 0.0))
    throw std::invalid_argument("chain: mass0 > 0 and coupling > 0");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i < D; ++i) {
    K(i, i) = mass0 * mass0 + 2.0 * coupling;
    if (i + 1 < D) K(i, i + 1) = K(i + 1, i) = -coupling;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  if (es.info() != Eigen::Success)
    throw NumericalDegeneracy("chain: eigensolver failed on K");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("chain: K not positive definite");

  const Eigen::VectorXd omega = es.eigenvalues().cwiseSqrt();
  const Eigen::MatrixXd& V = es.eigenvectors();
  CovarianceMatrix cov;
  cov.gamma = Eigen::MatrixXd::Zero(2 * D, 2 * D);
  cov.gamma.topLeftCorner(D, D) =
      V * omega.cwiseInverse().asDiagonal() * V.transpose();
  cov.gamma.bottomRightCorner(D, D) = V * omega.asDiagonal() * V.transpose();
  cov.validate();
  return cov;
}

// one half of a two-mode squeezed pair has nu = cosh(2r)/2; used as the
// analytically solvable reference state
inline CovarianceMatrix two_mode_squeezed_covariance(double r) {
  const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
  CovarianceMatrix cov;
  cov.gamma = Eigen::MatrixXd::Zero(4, 4);
  cov.gamma(0, 0) = cov.gamma(1, 1) = c;
  cov.gamma(0, 1) = cov.gamma(1, 0) = s;
  cov.gamma(2, 2) = cov.gamma(3, 3) = c;
  cov.gamma(2, 3) = cov.gamma(3, 2) = -s;
  return cov;
}

// keep the phi and pi rows/columns of the listed sites (0-based)
inline CovarianceMatrix restrict_covariance(const CovarianceMatrix& cov,
                                            std::span<const int> region) {
  cov.validate();
  const int D = cov.modes();
  if (region.empty())
    throw std::invalid_argument("restrict_covariance: empty region");
  std::vector<int> sites(region.begin(), region.end());
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
    throw std::invalid_argument("restrict_covariance: repeated site");
  if (sites.front() < 0 || sites.back() >= D)
    throw std::invalid_argument("restrict_covariance: site out of range");

  const int d = static_cast<int>(sites.size());
  CovarianceMatrix out;
  out.gamma.resize(2 * d, 2 * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      out.gamma(a, b) = cov.gamma(sites[a], sites[b]);
      out.gamma(a, d + b) = cov.gamma(sites[a], D + sites[b]);
      out.gamma(d + a, b) = cov.gamma(D + sites[a], sites[b]);
      out.gamma(d + a, d + b) = cov.gamma(D + sites[a], D + sites[b]);
    }
  return out;
}

struct SymplecticSpectrum {
  std::vector<double> nu;         // descending
  double pairing_residual = 0.0;  // max |nu_i^+ - nu_i^-| across +- pairs
};

inline SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix& cov) {
  cov.validate();
  const int D = cov.modes();
  const Eigen::MatrixXd C = 0.5 * cov.gamma;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_c(C);
  if (es_c.info() != Eigen::Success)
    throw NumericalDegeneracy("symplectic_spectrum: eigensolver failed on C");
  if (es_c.eigenvalues().minCoeff() <= 0.0)
    throw UnphysicalMode(
        "symplectic_spectrum: Gamma/2 not positive definite; min eig = " +
        std::to_string(es_c.eigenvalues().minCoeff()));
  const Eigen::MatrixXd W = es_c.operatorSqrt();

  Eigen::MatrixXd omega_inv = Eigen::MatrixXd::Zero(2 * D, 2 * D);
  omega_inv.topRightCorner(D, D) = -Eigen::MatrixXd::Identity(D, D);
  omega_inv.bottomLeftCorner(D, D) = Eigen::MatrixXd::Identity(D, D);

  // i W Omega^{-1} W is Hermitian because W Omega^{-1} W is antisymmetric
  const Eigen::MatrixXd woi = W * omega_inv * W;
  const Eigen::MatrixXcd H =
      std::complex<double>(0.0, 1.0) * woi.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_h(H,
                                                       Eigen::EigenvaluesOnly);
  if (es_h.info() != Eigen::Success)
    throw NumericalDegeneracy("symplectic_spectrum: eigensolver failed on H");

  const Eigen::VectorXd evals = es_h.eigenvalues();  // ascending
  SymplecticSpectrum spec;
  spec.nu.resize(D);
  for (int i = 0; i < D; ++i) {
    const double plus = evals(2 * D - 1 - i);
    const double minus = -evals(i);
    spec.pairing_residual =
        std::max(spec.pairing_residual, std::abs(plus - minus));
    spec.nu[i] = 0.5 * (plus + minus);
  }
  if (spec.pairing_residual >= 1e-8)
    throw NumericalDegeneracy(
        "symplectic_spectrum: +- pairing residual " +
        std::to_string(spec.pairing_residual) + " exceeds 1e-8");
  for (double nu : spec.nu)
    if (nu < 0.5 - 1e-8)
      throw UnphysicalMode("symplectic_spectrum: nu = " + std::to_string(nu) +
                           " below the vacuum floor 1/2");
  return spec;
}

// thermal-mode entropy (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2);
// nu within 1e-8 below 1/2 clamps to the vacuum, further below is unphysical
inline double mode_entropy(double nu, EntropyUnit unit) {
  if (nu < 0.5 - 1e-8)
    throw UnphysicalMode("mode_entropy: nu below 1/2");
  if (nu <= 0.5) return 0.0;
  const double p = nu + 0.5, m = nu - 0.5;
  return from_nats(p * std::log(p) - m * std::log(m), unit);
}

inline double bulk_entanglement_entropy(const CovarianceMatrix& cov,
                                        EntropyUnit unit) {
  double s = 0.0;
  for (double nu : symplectic_spectrum(cov).nu) s += mode_entropy(nu, unit);
  return s;
}

struct TruncatedEntropy {
  double value = 0.0;          // top-J modes by per-mode entropy
  double dropped_bound = 0.0;  // exact entropy in the discarded modes
};

// value + dropped_bound reproduces the full entropy identically; J = 0 is
// allowed and puts everything in the bound
inline TruncatedEntropy truncated_entropy(const CovarianceMatrix& cov, int J,
                                          EntropyUnit unit) {
  const auto spec = symplectic_spectrum(cov);
  const int D = static_cast<int>(spec.nu.size());
  if (J < 0 || J > D)
    throw std::invalid_argument("truncated_entropy: J in [0, D]");
  std::vector<double> s(D);
  for (int i = 0; i < D; ++i) s[i] = mode_entropy(spec.nu[i], unit);
  std::sort(s.begin(), s.end(), std::greater<>());
  TruncatedEntropy t;
  for (int i = 0; i < D; ++i)
    (i < J ? t.value : t.dropped_bound) += s[i];
  return t;
}

// generalized-entropy ledger: classical area piece plus the quantum
// corrections (bulk entanglement, area shift, Wald-like term, counterterms)
struct FlmBreakdown {
  double s_cl = 0.0;
  double s_bulk_ent = 0.0;
  double delta_area_term = 0.0;
  double wald_like = 0.0;
  double counterterms = 0.0;
  double total = 0.0;
};

inline FlmBreakdown flm_assemble(double s_cl, double s_bulk_ent,
                                 double delta_area_term, double wald_like,
                                 double counterterms) {
  FlmBreakdown b;
  b.s_cl = s_cl;
  b.s_bulk_ent = s_bulk_ent;
  b.delta_area_term = delta_area_term;
  b.wald_like = wald_like;
  b.counterterms = counterterms;
  b.total = s_cl + s_bulk_ent + delta_area_term + wald_like + counterterms;
  return b;
}

// power-law decay exponent of <phi phi> correlations away from a bulk site:
// fits ln |Gamma_phiphi(i0, i0 + d)| against ln d and returns -slope
inline double phi_correlation_decay_exponent(const CovarianceMatrix& cov) {
  cov.validate();
  const int D = cov.modes();
  if (D < 8)
    throw std::invalid_argument("decay exponent: needs at least 8 sites");
  const int i0 = D / 4;
  std::vector<double> xs, ys;
  for (int d = 1; i0 + d < 3 * D / 4; ++d) {
    const double g = std::abs(cov.gamma(i0, i0 + d));
    if (g <= 0.0) break;
    xs.push_back(std::log(static_cast<double>(d)));
    ys.push_back(std::log(g));
  }
  if (xs.size() < 3)
    throw std::invalid_argument("decay exponent: too few usable separations");
  return -fit_linear(xs, ys).slope;
}

}  // namespace hololab::bulk
