#include "lrcs/certificate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace lrcs {

namespace {

constexpr long kCertificateCellBudget = 50000000;  // s * L * T

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// The support rows of A = (I - P_V) kron R'(I - P_U) are vec(a_p b_p')' with
// a_p = (I-P_U) R e_{i_p} and b_p = (I-P_V) e_{j_p}; everything below works
// with these rank-1 factors instead of materializing A.
struct SupportFactors {
  std::vector<Vector> a;  // length-L factors
  std::vector<Vector> b;  // length-T factors
  Matrix gram;            // A_Omega A_Omega', s x s
};

SupportFactors support_factors(const Subspaces& spaces, const SupportSet& support,
                               const Matrix& r) {
  const long s = support.size();
  const Eigen::Index T = spaces.v_basis.rows();
  SupportFactors f;
  f.a.reserve(static_cast<std::size_t>(s));
  f.b.reserve(static_cast<std::size_t>(s));
  for (const auto& [i, j] : support.indices()) {
    Vector a = r.col(i) - spaces.u_basis * (spaces.u_basis.transpose() * r.col(i));
    Vector b = Vector::Zero(T);
    b[j] = 1.0;
    b -= spaces.v_basis * spaces.v_basis.row(j).transpose();
    f.a.push_back(std::move(a));
    f.b.push_back(std::move(b));
  }
  f.gram.resize(s, s);
  for (long p = 0; p < s; ++p)
    for (long q = p; q < s; ++q) {
      const double v = f.a[static_cast<std::size_t>(p)].dot(f.a[static_cast<std::size_t>(q)]) *
                       f.b[static_cast<std::size_t>(p)].dot(f.b[static_cast<std::size_t>(q)]);
      f.gram(p, q) = f.gram(q, p) = v;
    }
  return f;
}

void check_certificate_inputs(const Subspaces& spaces, const SupportSet& support,
                              const Matrix& r) {
  if (spaces.u_basis.rows() != r.rows())
    throw std::invalid_argument("certificate: u_basis rows must match R rows");
  if (support.rows() != r.cols())
    throw std::invalid_argument("certificate: support rows must match R cols");
  const long cells = support.size() * static_cast<long>(spaces.u_basis.rows()) *
                     static_cast<long>(spaces.v_basis.rows());
  if (cells > kCertificateCellBudget)
    throw std::invalid_argument("certificate: support too large for dense assembly");
}

}  // namespace

CertificateReport verify_certificate(const Matrix& gamma, const Subspaces& spaces,
                                     const SupportSet& support, const Matrix& sign_source,
                                     const Matrix& r, double lambda, double tol_eq) {
  check_certificate_inputs(spaces, support, r);
  require_shape(gamma, spaces.u_basis.rows(), spaces.v_basis.rows(), "verify_certificate: gamma");
  require_shape(sign_source, support.rows(), support.cols(), "verify_certificate: sign_source");

  CertificateReport rep;
  rep.gamma_hat = gamma;
  rep.lambda = lambda;

  const Matrix uv = spaces.u_basis * spaces.v_basis.transpose();
  rep.c1_residual = (proj_phi(gamma, spaces) - uv).norm();
  rep.c3_value = norm(proj_phi(gamma, spaces, /*complement=*/true), NormKind::Spectral);

  const Matrix rg = r.transpose() * gamma;  // F x T
  double c2_sq = 0.0;
  for (const auto& [i, j] : support.indices()) {
    const double d = rg(i, j) - lambda * sgn(sign_source(i, j));
    c2_sq += d * d;
  }
  rep.c2_residual = std::sqrt(c2_sq);
  double c4 = 0.0;
  for (Eigen::Index i = 0; i < rg.rows(); ++i)
    for (Eigen::Index j = 0; j < rg.cols(); ++j)
      if (!support.contains(static_cast<int>(i), static_cast<int>(j)))
        c4 = std::max(c4, std::abs(rg(i, j)));
  rep.c4_value = c4;

  const double tol_c1 = tol_eq * uv.norm();
  const double tol_c2 = tol_eq * lambda * std::sqrt(static_cast<double>(support.size()));
  rep.valid = rep.c1_residual <= tol_c1 && rep.c2_residual <= tol_c2 && rep.c3_value < 1.0 &&
              rep.c4_value < lambda;
  return rep;
}

CertificateReport build_certificate(const Subspaces& spaces, const SupportSet& support,
                                    const Matrix& sign_source, const Matrix& r, double lambda,
                                    double tol_eq) {
  check_certificate_inputs(spaces, support, r);
  require_shape(sign_source, support.rows(), support.cols(), "build_certificate: sign_source");
  const Matrix uv = spaces.u_basis * spaces.v_basis.transpose();
  const long s = support.size();
  if (s == 0) return verify_certificate(uv, spaces, support, sign_source, r, lambda, tol_eq);

  const SupportFactors f = support_factors(spaces, support, r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.gram);
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > 0.0) || std::sqrt(lo) < 1e-10)
    throw numeric_error(
        "build_certificate: A_Omega A_Omega' is numerically singular; the full-row-rank "
        "hypothesis fails on this instance");

  // b_Omega = lambda sign(A0) - P_Omega(R'UV') restricted to the support
  const Matrix ruv = r.transpose() * uv;
  Vector b(s);
  {
    long p = 0;
    for (const auto& [i, j] : support.indices())
      b[p++] = lambda * sgn(sign_source(i, j)) - ruv(i, j);
  }
  const Vector w = es.eigenvectors() *
                   (es.eigenvalues().cwiseInverse().asDiagonal() *
                    (es.eigenvectors().transpose() * b));

  Matrix x_ln = Matrix::Zero(spaces.u_basis.rows(), spaces.v_basis.rows());
  for (long p = 0; p < s; ++p)
    x_ln.noalias() +=
        w[p] * f.a[static_cast<std::size_t>(p)] * f.b[static_cast<std::size_t>(p)].transpose();

  // a_p/b_p are already complement-projected; one more pass only trims roundoff
  const Matrix gamma = uv + proj_phi(x_ln, spaces, /*complement=*/true);
  return verify_certificate(gamma, spaces, support, sign_source, r, lambda, tol_eq);
}

LemmaBounds lemma_bounds(const Subspaces& spaces, const SupportSet& support, const Matrix& r,
                         double c, const RicEstimate& delta_k, double mu) {
  check_certificate_inputs(spaces, support, r);
  const long s = support.size();
  if (s == 0) throw std::invalid_argument("lemma_bounds: empty support");

  LemmaBounds out;
  const SupportFactors f = support_factors(spaces, support, r);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f.gram);
  const double lo = es.eigenvalues().minCoeff();
  out.sigma_min_a_omega = std::sqrt(std::max(0.0, lo));
  out.lemma3_bound = std::sqrt(c) * std::sqrt(std::max(0.0, 1.0 - delta_k.value)) * (1.0 - mu);
  if (!(lo > 0.0) || std::sqrt(lo) < 1e-10)
    throw numeric_error("lemma_bounds: A_Omega A_Omega' is numerically singular");

  // Q = A_Omega_perp A_Omega' (A_Omega A_Omega')^{-1}, built column by column:
  // column q of A_Omega' G^{-1} is an L x T matrix X_q; applying the operator
  // A maps it to the F x T slab W_q, whose off-support entries form Q.
  const Matrix ginv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
  const int F = support.rows(), T = support.cols();
  std::vector<Matrix> slabs;
  slabs.reserve(static_cast<std::size_t>(s));
  for (long q = 0; q < s; ++q) {
    Matrix xq = Matrix::Zero(spaces.u_basis.rows(), spaces.v_basis.rows());
    for (long p = 0; p < s; ++p)
      xq.noalias() += ginv(p, q) * f.a[static_cast<std::size_t>(p)] *
                      f.b[static_cast<std::size_t>(p)].transpose();
    // X_q is (I-P_U)(.)(I-P_V)-clean, so A vec(X_q) reduces to R' X_q
    slabs.push_back(r.transpose() * xq);
  }
  Matrix qtq = Matrix::Zero(s, s);
  double inf_norm = 0.0;
  Vector row(s);
  for (int i = 0; i < F; ++i)
    for (int j = 0; j < T; ++j) {
      if (support.contains(i, j)) continue;
      for (long q = 0; q < s; ++q) row[q] = slabs[static_cast<std::size_t>(q)](i, j);
      qtq.noalias() += row * row.transpose();
      inf_norm = std::max(inf_norm, row.cwiseAbs().sum());
    }
  Eigen::SelfAdjointEigenSolver<Matrix> esq(qtq, Eigen::EigenvaluesOnly);
  out.q_spectral = std::sqrt(std::max(0.0, esq.eigenvalues().maxCoeff()));
  out.q_induced_inf = inf_norm;

  // alpha_max / beta_max per the main theorem, with delta_1 and theta_11
  // enumerated here at the same normalization c.
  IncoherenceReport inc = incoherence_params(spaces, support, r);
  inc.mu = mu;
  const RicEstimate d1 = ric_delta(r, 1, c);
  const RicEstimate th = ric_theta(r, 1, 1, c);
  const int k = std::max(support.max_row_count(), support.max_col_count());
  const ConditionReport cond =
      check_theorem1(inc, delta_k, th, d1, spaces.rank(), s, k, c);
  out.alpha_max = cond.alpha_max;
  out.beta_max = cond.beta_max;
  out.omega_max = cond.omega_max;
  out.cond_i = cond.cond_i;
  return out;
}

}  // namespace lrcs
