#pragma once

#include "lrcs/diagnostics.hpp"
#include "lrcs/matcore.hpp"

namespace lrcs {

// Dual certificate Gamma with the C1-C4 margins. valid requires the two
// equality residuals below tolerance, ||P_Phi_perp(Gamma)|| < 1 and
// ||P_Omega_perp(R' Gamma)||_inf < lambda.
struct CertificateReport {
  Matrix gamma_hat;          // L x T
  double c1_residual = 0.0;  // ||P_Phi(Gamma) - U V'||_F
  double c2_residual = 0.0;  // ||P_Omega(R' Gamma) - lambda sign(A0)||_F
  double c3_value = 0.0;     // ||P_Phi_perp(Gamma)|| (spectral)
  double c4_value = 0.0;     // ||P_Omega_perp(R' Gamma)||_inf
  double lambda = 0.0;
  bool valid = false;
};

// C1/C2 residual tolerance, relative to ||U V'||_F and lambda*sqrt(s).
constexpr double kCertificateTol = 1e-8;

// Checks C1-C4 for a candidate Gamma. sign_source supplies sign(A0): only the
// signs of its support entries are read, so passing A0 itself is fine.
CertificateReport verify_certificate(const Matrix& gamma, const Subspaces& spaces,
                                     const SupportSet& support, const Matrix& sign_source,
                                     const Matrix& r, double lambda,
                                     double tol_eq = kCertificateTol);

// Least-norm certificate: solves A_Omega vec(X) = b_Omega for the
// minimum-Frobenius-norm X and returns
// Gamma = U V' + (I - P_U) X_LN (I - P_V), already verified.
CertificateReport build_certificate(const Subspaces& spaces, const SupportSet& support,
                                    const Matrix& sign_source, const Matrix& r, double lambda,
                                    double tol_eq = kCertificateTol);

// Exact values entering Lemmas 3 and 4, with the bounds they are compared to.
struct LemmaBounds {
  double sigma_min_a_omega = 0.0;  // smallest singular value of A_Omega'
  double lemma3_bound = 0.0;       // c^{1/2} (1-delta_k)^{1/2} (1-mu)
  double q_spectral = 0.0;         // ||Q||
  double alpha_max = 0.0;
  double q_induced_inf = 0.0;      // ||Q||_{inf,inf}
  double beta_max = 0.0;
  double omega_max = 0.0;
  bool cond_i = false;
};

LemmaBounds lemma_bounds(const Subspaces& spaces, const SupportSet& support, const Matrix& r,
                         double c, const RicEstimate& delta_k, double mu);

}  // namespace lrcs
