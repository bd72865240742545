#include "lrcs/diagnostics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <vector>

namespace lrcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// C(n, k) saturating at the enumeration budget + 1.
long binomial_capped(int n, int k, long cap) {
  if (k < 0 || k > n) return 0;
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / i;
    if (v > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<long>(v + 0.5);
}

// Visits every k-subset of [0, n) in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q)
      idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
}

void check_ric_inputs(const Matrix& r, int k, double c) {
  require_finite(r, "ric");
  if (k < 1 || k > r.cols()) throw std::invalid_argument("ric: k out of [1, F]");
  if (!(c > 0.0)) throw std::invalid_argument("ric: normalization c must be > 0");
}

// Extreme eigenvalues of R_S' R_S for one subset.
std::pair<double, double> gram_extremes(const Matrix& r, const std::vector<int>& subset,
                                        const Matrix& gram) {
  const int k = static_cast<int>(subset.size());
  if (k == 1) {
    const double v = gram(subset[0], subset[0]);
    return {v, v};
  }
  Matrix gs(k, k);
  for (int p = 0; p < k; ++p)
    for (int q = 0; q < k; ++q)
      gs(p, q) = gram(subset[static_cast<std::size_t>(p)], subset[static_cast<std::size_t>(q)]);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gs, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev[0], ev[k - 1]};
}

}  // namespace

IncoherenceReport incoherence_params(const Subspaces& spaces, const SupportSet& support,
                                     const Matrix& r) {
  const Eigen::Index L = r.rows(), F = r.cols();
  if (spaces.u_basis.rows() != L)
    throw std::invalid_argument("incoherence_params: u_basis rows must match R rows");
  if (support.rows() != F)
    throw std::invalid_argument("incoherence_params: support rows must match R cols");
  if (spaces.v_basis.rows() != support.cols())
    throw std::invalid_argument("incoherence_params: v_basis rows must match support cols");
  require_finite(r, "incoherence_params: r");

  IncoherenceReport rep;
  for (Eigen::Index i = 0; i < spaces.u_basis.rows(); ++i)
    rep.gamma_u = std::max(rep.gamma_u, spaces.u_basis.row(i).norm());
  for (Eigen::Index j = 0; j < spaces.v_basis.rows(); ++j)
    rep.gamma_v = std::max(rep.gamma_v, spaces.v_basis.row(j).norm());

  const Matrix ur = spaces.u_basis.transpose() * r;  // rank x F
  for (Eigen::Index i = 0; i < F; ++i) {
    const double cn = r.col(i).norm();
    if (!(cn > 0.0))
      throw numeric_error("incoherence_params: column " + std::to_string(i) +
                          " of R is zero (degenerate input)");
    rep.gamma_r_u = std::max(rep.gamma_r_u, ur.col(i).norm() / cn);
    rep.eta_r = std::max(rep.eta_r, r.col(i).cwiseAbs().sum() / cn);
  }
  rep.xi_r = spaces.rank() == 0
                 ? 0.0
                 : norm(ur.transpose() * spaces.v_basis.transpose(), NormKind::LinfEntrywise);

  // mu via the s x s generalized eigenproblem on the support elements.
  const long s = support.size();
  if (s == 0) {
    rep.mu = 0.0;
    return rep;
  }
  const auto& idx = support.indices();
  const Matrix gram = r.transpose() * r;           // F x F
  const Matrix pu_gram = ur.transpose() * ur;      // F x F, (Re_i)'P_U(Re_k)
  const Matrix pv = spaces.v_basis * spaces.v_basis.transpose();  // T x T
  Matrix g(s, s), gp(s, s);
  for (long p = 0; p < s; ++p) {
    const auto [ip, jp] = idx[static_cast<std::size_t>(p)];
    for (long q = p; q < s; ++q) {
      const auto [iq, jq] = idx[static_cast<std::size_t>(q)];
      const double same_col = (jp == jq) ? 1.0 : 0.0;
      const double gr = gram(ip, iq);
      const double m1 = pu_gram(ip, iq);
      const double pvv = pv(jp, jq);
      g(p, q) = g(q, p) = gr * same_col;
      gp(p, q) = gp(q, p) = m1 * same_col + gr * pvv - m1 * pvv;
    }
  }
  // Whitened reduction handles R H = 0 directions (excluded from Omega_R).
  Eigen::SelfAdjointEigenSolver<Matrix> esg(g);
  const double gmax = esg.eigenvalues().maxCoeff();
  if (!(gmax > 0.0)) throw numeric_error("incoherence_params: Omega_R is trivial (R H = 0)");
  std::vector<long> keep;
  for (long i = 0; i < s; ++i)
    if (esg.eigenvalues()[i] > 1e-12 * gmax) keep.push_back(i);
  Matrix w(s, static_cast<long>(keep.size()));
  for (std::size_t q = 0; q < keep.size(); ++q)
    w.col(static_cast<long>(q)) =
        esg.eigenvectors().col(keep[q]) / std::sqrt(esg.eigenvalues()[keep[q]]);
  Eigen::SelfAdjointEigenSolver<Matrix> esp(w.transpose() * gp * w, Eigen::EigenvaluesOnly);
  rep.mu = std::sqrt(std::max(0.0, esp.eigenvalues().maxCoeff()));
  rep.mu = std::min(rep.mu, 1.0);
  return rep;
}

RicEstimate ric_delta(const Matrix& r, int k, double c) {
  check_ric_inputs(r, k, c);
  const int F = static_cast<int>(r.cols());
  const long count = binomial_capped(F, k, kRicEnumerationBudget);
  if (count > kRicEnumerationBudget)
    throw std::invalid_argument("ric_delta: C(" + std::to_string(F) + "," + std::to_string(k) +
                                ") exceeds the enumeration budget of " +
                                std::to_string(kRicEnumerationBudget));
  const Matrix gram = r.transpose() * r;
  double worst = 0.0;
  long examined = 0;
  for_each_subset(F, k, [&](const std::vector<int>& subset) {
    const auto [lo, hi] = gram_extremes(r, subset, gram);
    worst = std::max(worst, std::max(1.0 - lo / c, hi / c - 1.0));
    ++examined;
  });
  return RicEstimate{k, 0, c, worst, examined, true};
}

RicEstimate ric_theta(const Matrix& r, int s1, int s2, double c) {
  check_ric_inputs(r, s1, c);
  const int F = static_cast<int>(r.cols());
  if (s2 < 1 || s1 + s2 > F) throw std::invalid_argument("ric_theta: need s1 + s2 <= F");
  const long pairs = [&] {
    const long c1 = binomial_capped(F, s1, kRicEnumerationBudget);
    const long c2 = binomial_capped(F - s1, s2, kRicEnumerationBudget);
    if (c1 > kRicEnumerationBudget || c2 > kRicEnumerationBudget ||
        c1 > kRicEnumerationBudget / c2)
      return kRicEnumerationBudget + 1;
    return c1 * c2;
  }();
  if (pairs > kRicEnumerationBudget)
    throw std::invalid_argument("ric_theta: subset pair count exceeds the enumeration budget");

  const Matrix gram = r.transpose() * r;
  double worst = 0.0;
  long examined = 0;
  std::vector<int> comp;
  for_each_subset(F, s1, [&](const std::vector<int>& sub1) {
    comp.clear();
    std::vector<char> in1(static_cast<std::size_t>(F), 0);
    for (int i : sub1) in1[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < F; ++i)
      if (!in1[static_cast<std::size_t>(i)]) comp.push_back(i);
    for_each_subset(static_cast<int>(comp.size()), s2, [&](const std::vector<int>& pick) {
      if (s1 == 1 && s2 == 1) {
        worst = std::max(worst, std::abs(gram(sub1[0], comp[static_cast<std::size_t>(pick[0])])));
      } else {
        Matrix cross(s1, s2);
        for (int p = 0; p < s1; ++p)
          for (int q = 0; q < s2; ++q)
            cross(p, q) = gram(sub1[static_cast<std::size_t>(p)],
                               comp[static_cast<std::size_t>(pick[static_cast<std::size_t>(q)])]);
        Eigen::JacobiSVD<Matrix> dec(cross);
        worst = std::max(worst, dec.singularValues()[0]);
      }
      ++examined;
    });
  });
  return RicEstimate{s1, s2, c, worst / c, examined, true};
}

double ric_normalization(const Matrix& r, int k) {
  check_ric_inputs(r, k, 1.0);
  const int F = static_cast<int>(r.cols());
  const long count = binomial_capped(F, k, kRicEnumerationBudget);
  if (count > kRicEnumerationBudget)
    throw std::invalid_argument("ric_normalization: enumeration budget exceeded");
  const Matrix gram = r.transpose() * r;
  double lo = kInf, hi = -kInf;
  for_each_subset(F, k, [&](const std::vector<int>& subset) {
    const auto [l, h] = gram_extremes(r, subset, gram);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  });
  return (hi + lo) / 2.0;
}

ConditionReport check_theorem1(const IncoherenceReport& inc, const RicEstimate& delta_k,
                               const RicEstimate& theta_11, const RicEstimate& delta_1,
                               int r_rank, long s, int k, double c) {
  ConditionReport rep;
  rep.mu = inc.mu;
  rep.delta_k = delta_k.value;
  rep.theta_11 = theta_11.value;
  rep.delta_1 = delta_1.value;
  rep.gamma_v = inc.gamma_v;
  rep.gamma_r_u = inc.gamma_r_u;
  rep.xi_r = inc.xi_r;
  rep.c = c;
  rep.s = s;
  rep.k = k;
  rep.r_rank = r_rank;

  const double mu = inc.mu, dk = delta_k.value, d1 = delta_1.value, th = theta_11.value;
  const double gv2 = inc.gamma_v * inc.gamma_v;
  const double gru2 = inc.gamma_r_u * inc.gamma_r_u;
  const double sqrt2 = std::sqrt(2.0);

  rep.omega_max = th * (sqrt2 * k + s * gv2) +
                  (1.0 + d1) * (sqrt2 * k * gru2 + k * gv2 + s * gru2 * gv2);

  const double margin = (1.0 - mu) * (1.0 - mu) * (1.0 - dk);
  rep.cond_i = margin > rep.omega_max;

  const double alpha_arg = 1.0 / (c * (1.0 - dk) * (1.0 - mu) * (1.0 - mu)) - 1.0;
  if (!(dk < 1.0) || !(mu < 1.0)) {
    rep.alpha_max = kInf;
  } else if (alpha_arg < 0.0) {
    rep.alpha_max = 0.0;
    rep.inputs_valid = false;  // c(1-delta)(1-mu)^2 > 1 should be impossible for c <= 1
  } else {
    rep.alpha_max = std::sqrt(alpha_arg);
  }

  const double beta_den = margin - rep.omega_max;
  rep.beta_max = beta_den > 0.0 ? rep.omega_max / beta_den : kInf;

  if (rep.inputs_valid && rep.beta_max < 1.0 && std::isfinite(rep.alpha_max)) {
    const double lhs =
        (1.0 + rep.alpha_max) * ((1.0 + rep.beta_max) / (1.0 - rep.beta_max)) * inc.xi_r *
            std::sqrt(static_cast<double>(s)) +
        mu * std::sqrt(1.0 + dk) * (1.0 + rep.alpha_max) * std::sqrt(static_cast<double>(r_rank));
    rep.cond_ii = lhs < 1.0;
  }

  rep.lambda_min = rep.beta_max < 1.0
                       ? ((1.0 + rep.beta_max) / (1.0 - rep.beta_max)) * inc.xi_r
                       : kInf;
  rep.lambda_max =
      s > 0 ? (1.0 / std::sqrt(static_cast<double>(s))) *
                  (1.0 / (1.0 + rep.alpha_max) -
                   std::sqrt(static_cast<double>(r_rank)) * mu * std::sqrt(c) * std::sqrt(1.0 + dk))
            : kInf;
  return rep;
}

bool check_cs(const RicEstimate& delta_k, const RicEstimate& theta_11, int k) {
  if (!delta_k.exact || !theta_11.exact)
    throw std::invalid_argument("check_cs: estimates must be exact");
  return delta_k.value + k * theta_11.value < 1.0;
}

ConditionReport check_pcp(const IncoherenceReport& inc, double rho, int r_rank, long s, int k,
                          int L, int T) {
  ConditionReport rep;
  rep.mu = inc.mu;
  rep.c = 1.0;
  rep.s = s;
  rep.k = k;
  rep.r_rank = r_rank;

  const double mu = inc.mu;
  rep.omega_max = rho * r_rank * k * (1.0 / L + 1.0 / T);
  // The displayed condition is 0 < mu < 1 - sqrt(omega_max); mu = 0 (exactly
  // orthogonal subspaces) is admitted, reducing to omega_max < 1.
  rep.cond_i = mu < 1.0 - std::sqrt(rep.omega_max);

  if (mu < 1.0) {
    const double arg = 1.0 / ((1.0 - mu) * (1.0 - mu)) - 1.0;
    rep.alpha_max = std::sqrt(std::max(0.0, arg));
  } else {
    rep.alpha_max = kInf;
  }
  const double beta_den = (1.0 - mu) * (1.0 - mu) - rep.omega_max;
  rep.beta_max = beta_den > 0.0 ? rep.omega_max / beta_den : kInf;

  const double xi_bound = std::sqrt(rho * r_rank / (static_cast<double>(L) * T));
  if (rep.beta_max < 1.0 && std::isfinite(rep.alpha_max)) {
    const double lhs = (1.0 + rep.alpha_max) * std::sqrt(static_cast<double>(r_rank)) *
                       (((1.0 + rep.beta_max) / (1.0 - rep.beta_max)) *
                            std::sqrt(rho * s / (static_cast<double>(L) * T)) +
                        mu);
    rep.cond_ii = lhs < 1.0;
  }
  rep.lambda_min =
      rep.beta_max < 1.0 ? ((1.0 + rep.beta_max) / (1.0 - rep.beta_max)) * xi_bound : kInf;
  rep.lambda_max = s > 0 ? (1.0 / std::sqrt(static_cast<double>(s))) *
                               (1.0 / (1.0 + rep.alpha_max) -
                                std::sqrt(static_cast<double>(r_rank)) * mu)
                         : kInf;
  return rep;
}

}  // namespace lrcs
