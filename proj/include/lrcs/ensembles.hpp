#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lrcs/matcore.hpp"

namespace lrcs {

// Generated problem instance: y = x0 + r*a0 (+ noise when requested),
// together with the exact support of a0 and the subspaces of x0.
struct GroundTruth {
  Matrix x0;  // L x T
  Matrix a0;  // F x T
  Matrix r;   // L x F
  Matrix y;   // L x T
  SupportSet support;
  Subspaces spaces;
};

// X0 = W Z' with W ~ N(0, 1/L) (L x r) and Z ~ N(0, 1/T) (T x r).
Matrix gen_bilinear_lowrank(int L, int T, int r, std::uint64_t seed);
// The factors themselves, for moment tests.
std::pair<Matrix, Matrix> gen_bilinear_factors(int L, int T, int r, std::uint64_t seed);

// Random orthogonal model: U, V from QR of i.i.d. Gaussian matrices,
// X0 = U diag(singular_values) V'.
struct OrthogonalLowRank {
  Matrix x;
  Subspaces spaces;
};
OrthogonalLowRank gen_random_orthogonal_lowrank(int L, int F, int r,
                                                const std::vector<double>& singular_values,
                                                std::uint64_t seed);

struct SparsityModel {
  enum class Kind { Bernoulli, Uniform } kind = Kind::Bernoulli;
  double pi = 0.0;  // Bernoulli: per-entry probability
  long s = 0;       // Uniform: exact support size

  static SparsityModel bernoulli(double pi) { return {Kind::Bernoulli, pi, 0}; }
  static SparsityModel uniform(long s) { return {Kind::Uniform, 0.0, s}; }
};

struct AmplitudeModel {
  enum class Kind { Signs, Gaussian } kind = Kind::Signs;
  double sd = 1.0;  // Gaussian std deviation; Signs are scaled by sd as well

  static AmplitudeModel signs(double scale = 1.0) { return {Kind::Signs, scale}; }
  static AmplitudeModel gaussian(double sd) { return {Kind::Gaussian, sd}; }
};

std::pair<Matrix, SupportSet> gen_sparse(int F, int T, const SparsityModel& sparsity,
                                         const AmplitudeModel& amplitude, std::uint64_t seed);

struct CompressionSpec {
  enum class Mode { Identity, BernoulliSvd, BlockBounded } mode = Mode::BernoulliSvd;
  enum class Transform { Dct, Hadamard } transform = Transform::Dct;
  int block_rows = 0;  // ell: rows kept per block
  int block_cols = 0;  // f: block width

  static CompressionSpec identity() { return {Mode::Identity, Transform::Dct, 0, 0}; }
  static CompressionSpec bernoulli_svd() { return {Mode::BernoulliSvd, Transform::Dct, 0, 0}; }
  static CompressionSpec block_bounded(int ell, int f, Transform t = Transform::Dct) {
    return {Mode::BlockBounded, t, ell, f};
  }
};

// Identity: I_L (requires L == F). BernoulliSvd: right singular vectors of an
// i.i.d. Bernoulli(1/2) L x F matrix, giving orthonormal rows. BlockBounded:
// block-diagonal, each block selecting ell distinct rows of a bounded
// orthonormal f x f transform (DCT-II by default; Walsh-Hadamard when f is a
// power of two).
Matrix gen_compression(int L, int F, const CompressionSpec& spec, std::uint64_t seed);

// The f x f transforms used by the block-bounded model (orthonormal).
Matrix dct_matrix(int f);
Matrix hadamard_matrix(int f);

// y = x0 + r*a0 + E with E i.i.d. N(0, noise_sd^2).
GroundTruth synthesize_observation(const Matrix& x0, const Matrix& a0, const Matrix& r,
                                   double noise_sd, std::uint64_t seed);

// (Pi_r y, Pi_r r Pi_c): out_y.row(p) = y.row(row_perm[p]),
// out_r(p, q) = r(row_perm[p], col_perm[q]).
std::pair<Matrix, Matrix> permute_transform(const Matrix& y, const Matrix& r,
                                            const std::vector<int>& row_perm,
                                            const std::vector<int>& col_perm);

}  // namespace lrcs
