#pragma once

#include <utility>
#include <vector>

#include "lrcs/dense.hpp"

namespace lrcs {

constexpr double kDefaultRankTol = 1e-9;

// Thin SVD m = u * diag(sigma) * v', sigma nonincreasing.
struct SvdFactors {
  Matrix u;      // L x p
  Vector sigma;  // p, nonincreasing, >= 0
  Matrix v;      // T x p
  double rank_tol = kDefaultRankTol;

  // Count of sigma > rank_tol * sigma[0].
  int numerical_rank() const;
};

// Rank-r column/row space pair (U, V) of a low-rank matrix; orthonormal
// columns. Defines the tangent-space projector P_Phi.
struct Subspaces {
  Matrix u_basis;  // L x r
  Matrix v_basis;  // T x r

  int rank() const { return static_cast<int>(u_basis.cols()); }
};

// Support pattern of a sparse F x T matrix; defines the projector P_Omega.
class SupportSet {
 public:
  SupportSet() = default;
  SupportSet(int rows, int cols, std::vector<std::pair<int, int>> indices);

  // Exact nonzero pattern of a matrix.
  static SupportSet from_pattern(const Matrix& a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long size() const { return static_cast<long>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  const std::vector<std::pair<int, int>>& indices() const { return indices_; }
  bool contains(int i, int j) const { return mask_[static_cast<std::size_t>(i) * cols_ + j] != 0; }

  // Max nonzero count over rows / columns (the paper's k).
  int max_row_count() const;
  int max_col_count() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::pair<int, int>> indices_;  // sorted, unique
  std::vector<unsigned char> mask_;
};

SvdFactors svd(const Matrix& m, double rank_tol = kDefaultRankTol);

// Column/row spaces of m at the given relative rank cutoff.
Subspaces subspaces_of(const Matrix& m, double rank_tol = kDefaultRankTol);

enum class NormKind {
  Frobenius,
  L1Entrywise,
  LinfEntrywise,
  Nuclear,
  Spectral,
  InducedOne,  // max column absolute sum
  InducedInf,  // max row absolute sum
};

double norm(const Matrix& m, NormKind kind);

// Entrywise soft-thresholding S_tau.
Matrix soft_threshold(const Matrix& m, double tau);

// Singular value thresholding: u * S_tau(diag(sigma)) * v'.
Matrix svt(const Matrix& m, double tau);
// Same, reusing an existing factorization; also reports the thresholded
// singular values (they are exactly the singular values of the result).
Matrix svt(const SvdFactors& f, double tau, Vector* thresholded_sigma = nullptr);

// P_Phi(m) = P_U m + m P_V - P_U m P_V; complement: (I-P_U) m (I-P_V).
Matrix proj_phi(const Matrix& m, const Subspaces& s, bool complement = false);

// Keeps entries on the support (or on its complement), zeroes the rest.
Matrix proj_omega(const Matrix& m, const SupportSet& s, bool complement = false);

// L_f = lambda_max([I R]'[I R]) = 1 + ||R||^2.
double lipschitz_constant(const Matrix& r);

}  // namespace lrcs
