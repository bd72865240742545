#include "lrcs/matcore.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace lrcs {

int SvdFactors::numerical_rank() const {
  if (sigma.size() == 0) return 0;
  const double cutoff = rank_tol * sigma[0];
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma[i] > cutoff) ++r;
  return r;
}

SupportSet::SupportSet(int rows, int cols, std::vector<std::pair<int, int>> indices)
    : rows_(rows), cols_(cols), indices_(std::move(indices)) {
  if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("SupportSet: negative shape");
  mask_.assign(static_cast<std::size_t>(rows_) * cols_, 0);
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t p = 0; p < indices_.size(); ++p) {
    const auto [i, j] = indices_[p];
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw std::invalid_argument("SupportSet: index out of range");
    if (p > 0 && indices_[p] == indices_[p - 1])
      throw std::invalid_argument("SupportSet: duplicate index");
    mask_[static_cast<std::size_t>(i) * cols_ + j] = 1;
  }
}

SupportSet SupportSet::from_pattern(const Matrix& a) {
  std::vector<std::pair<int, int>> idx;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) idx.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return SupportSet(static_cast<int>(a.rows()), static_cast<int>(a.cols()), std::move(idx));
}

int SupportSet::max_row_count() const {
  std::vector<int> cnt(static_cast<std::size_t>(rows_), 0);
  for (const auto& [i, j] : indices_) ++cnt[static_cast<std::size_t>(i)];
  return cnt.empty() ? 0 : *std::max_element(cnt.begin(), cnt.end());
}

int SupportSet::max_col_count() const {
  std::vector<int> cnt(static_cast<std::size_t>(cols_), 0);
  for (const auto& [i, j] : indices_) ++cnt[static_cast<std::size_t>(j)];
  return cnt.empty() ? 0 : *std::max_element(cnt.begin(), cnt.end());
}

SvdFactors svd(const Matrix& m, double rank_tol) {
  require_finite(m, "svd");
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) throw numeric_error("svd: factorization did not converge");
  SvdFactors f;
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  f.rank_tol = rank_tol;
  return f;
}

Subspaces subspaces_of(const Matrix& m, double rank_tol) {
  const SvdFactors f = svd(m, rank_tol);
  const int r = f.numerical_rank();
  return Subspaces{f.u.leftCols(r), f.v.leftCols(r)};
}

double norm(const Matrix& m, NormKind kind) {
  switch (kind) {
    case NormKind::Frobenius:
      return m.norm();
    case NormKind::L1Entrywise:
      return m.cwiseAbs().sum();
    case NormKind::LinfEntrywise:
      return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    case NormKind::Nuclear:
      return svd(m).sigma.sum();
    case NormKind::Spectral: {
      if (m.size() == 0) return 0.0;
      const SvdFactors f = svd(m);
      return f.sigma.size() == 0 ? 0.0 : f.sigma[0];
    }
    case NormKind::InducedOne: {
      // max over columns; ties resolve to the lowest index by construction
      double best = 0.0;
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        best = std::max(best, m.col(j).cwiseAbs().sum());
      return best;
    }
    case NormKind::InducedInf: {
      double best = 0.0;
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        best = std::max(best, m.row(i).cwiseAbs().sum());
      return best;
    }
  }
  throw std::invalid_argument("norm: unknown kind");
}

Matrix soft_threshold(const Matrix& m, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  return m.unaryExpr([tau](double x) {
    const double mag = std::abs(x) - tau;
    return mag > 0.0 ? (x > 0.0 ? mag : -mag) : 0.0;
  });
}

Matrix svt(const SvdFactors& f, double tau, Vector* thresholded_sigma) {
  if (tau < 0.0) throw std::invalid_argument("svt: tau must be >= 0");
  Vector s = f.sigma;
  int keep = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s[i] = std::max(s[i] - tau, 0.0);
    if (s[i] > 0.0) keep = static_cast<int>(i) + 1;
  }
  if (thresholded_sigma) *thresholded_sigma = s;
  if (keep == 0) return Matrix::Zero(f.u.rows(), f.v.rows());
  return f.u.leftCols(keep) * s.head(keep).asDiagonal() * f.v.leftCols(keep).transpose();
}

Matrix svt(const Matrix& m, double tau) { return svt(svd(m), tau); }

Matrix proj_phi(const Matrix& m, const Subspaces& s, bool complement) {
  if (m.rows() != s.u_basis.rows() || m.cols() != s.v_basis.rows())
    throw std::invalid_argument("proj_phi: shape mismatch between matrix and subspaces");
  const Matrix um = s.u_basis.transpose() * m;        // r x T
  const Matrix mv = m * s.v_basis;                    // L x r
  const Matrix umv = um * s.v_basis;                  // r x r
  if (!complement) {
    // P_U m + m P_V - P_U m P_V
    return s.u_basis * um + mv * s.v_basis.transpose() -
           s.u_basis * umv * s.v_basis.transpose();
  }
  // (I - P_U) m (I - P_V)
  return m - s.u_basis * um - mv * s.v_basis.transpose() +
         s.u_basis * umv * s.v_basis.transpose();
}

Matrix proj_omega(const Matrix& m, const SupportSet& s, bool complement) {
  if (m.rows() != s.rows() || m.cols() != s.cols())
    throw std::invalid_argument("proj_omega: shape mismatch");
  if (!complement) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const auto& [i, j] : s.indices()) out(i, j) = m(i, j);
    return out;
  }
  Matrix out = m;
  for (const auto& [i, j] : s.indices()) out(i, j) = 0.0;
  return out;
}

double lipschitz_constant(const Matrix& r) {
  require_finite(r, "lipschitz_constant");
  // Nonzero spectrum of [I R]'[I R] equals that of I + RR', so
  // lambda_max = 1 + ||R||^2.
  const double spec = norm(r, NormKind::Spectral);
  return 1.0 + spec * spec;
}

}  // namespace lrcs
