#pragma once

#include "lrcs/matcore.hpp"

namespace lrcs {

// Identifiability quantities of a (subspaces, support, compression) triple.
struct IncoherenceReport {
  double mu = 0.0;         // mu(Omega_R, Phi)
  double gamma_u = 0.0;    // max_i ||P_U e_i||
  double gamma_v = 0.0;    // max_i ||P_V e_i||
  double gamma_r_u = 0.0;  // max_i ||P_U R e_i|| / ||R e_i||
  double xi_r = 0.0;       // ||R' U V'||_inf
  double eta_r = 0.0;      // max_i ||R e_i||_1 / ||R e_i||
};

// gamma(U), gamma(V), gamma_R(U), xi_R and eta(R) are evaluated from their
// definitions; mu is the square root of the largest generalized eigenvalue of
// (B'PB, B'B), where B stacks vec(R e_i e_j') over the support and P is the
// vec-form Phi-projector. Rank-deficient B'B (sparse matrices annihilated by
// R) is handled by restricting to the range of B.
IncoherenceReport incoherence_params(const Subspaces& spaces, const SupportSet& support,
                                     const Matrix& r);

// Restricted isometry estimate from exhaustive subset enumeration.
struct RicEstimate {
  int k1 = 0, k2 = 0;  // delta_k uses k1 only; theta uses (k1, k2)
  double c = 1.0;      // normalization constant
  double value = 0.0;
  long subsets_examined = 0;
  bool exact = false;
};

constexpr long kRicEnumerationBudget = 1000000;

// delta_k(R): max over k-subsets S of max(1 - l_S/c, u_S/c - 1) with
// (l_S, u_S) the extreme eigenvalues of R_S' R_S.
RicEstimate ric_delta(const Matrix& r, int k, double c);

// theta_{s1,s2}(R): (1/c) * max over disjoint subset pairs of the largest
// singular value of R_{S1}' R_{S2}.
RicEstimate ric_theta(const Matrix& r, int s1, int s2, double c);

// Normalization that centers the enumerated spectra: (max_S u_S + min_S l_S)/2.
double ric_normalization(const Matrix& r, int k);

struct ConditionReport {
  double omega_max = 0.0;
  double alpha_max = 0.0;
  double beta_max = 0.0;  // +inf when the denominator is nonpositive
  bool cond_i = false;
  bool cond_ii = false;
  double lambda_min = 0.0;  // empty interval allowed (lambda_min >= lambda_max)
  double lambda_max = 0.0;
  // inputs echoed
  double mu = 0.0, delta_k = 0.0, theta_11 = 0.0, delta_1 = 0.0;
  double gamma_v = 0.0, gamma_r_u = 0.0, xi_r = 0.0, c = 1.0;
  long s = 0;
  int k = 0, r_rank = 0;
  bool inputs_valid = true;
};

// Sufficient conditions I and II for exact recovery, plus the
// (lambda_min, lambda_max) interval from the dual-certificate construction.
ConditionReport check_theorem1(const IncoherenceReport& inc, const RicEstimate& delta_k,
                               const RicEstimate& theta_11, const RicEstimate& delta_1,
                               int r_rank, long s, int k, double c);

// delta_k(R) + k*theta_{1,1}(R) < 1 (compressed-sensing special case).
bool check_cs(const RicEstimate& delta_k, const RicEstimate& theta_11, int k);

// Principal components pursuit special case (R = I) under the rho-coherence
// model: omega_max = rho*r*k*(1/L + 1/T).
ConditionReport check_pcp(const IncoherenceReport& inc, double rho, int r_rank, long s, int k,
                          int L, int T);

}  // namespace lrcs
