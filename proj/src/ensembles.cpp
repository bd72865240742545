#include "lrcs/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lrcs/rng.hpp"

namespace lrcs {

namespace {

Matrix gaussian_matrix(int rows, int cols, double sd, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = sd * rng.gaussian();
  return m;
}

void check_permutation(const std::vector<int>& perm, Eigen::Index n, const char* what) {
  if (static_cast<Eigen::Index>(perm.size()) != n)
    throw std::invalid_argument(std::string(what) + ": permutation length mismatch");
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(n) || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument(std::string(what) + ": not a permutation");
    seen[static_cast<std::size_t>(p)] = 1;
  }
}

}  // namespace

std::pair<Matrix, Matrix> gen_bilinear_factors(int L, int T, int r, std::uint64_t seed) {
  if (r < 0 || r > std::min(L, T))
    throw std::invalid_argument("gen_bilinear_lowrank: rank out of range");
  Rng rng(derive_seed(seed, 0));
  Matrix w = gaussian_matrix(L, r, std::sqrt(1.0 / L), rng);
  Matrix z = gaussian_matrix(T, r, std::sqrt(1.0 / T), rng);
  return {std::move(w), std::move(z)};
}

Matrix gen_bilinear_lowrank(int L, int T, int r, std::uint64_t seed) {
  const auto [w, z] = gen_bilinear_factors(L, T, r, seed);
  return w * z.transpose();
}

OrthogonalLowRank gen_random_orthogonal_lowrank(int L, int F, int r,
                                                const std::vector<double>& singular_values,
                                                std::uint64_t seed) {
  if (r < 0 || r > std::min(L, F))
    throw std::invalid_argument("gen_random_orthogonal_lowrank: rank out of range");
  if (static_cast<int>(singular_values.size()) != r)
    throw std::invalid_argument("gen_random_orthogonal_lowrank: need exactly r singular values");
  for (double s : singular_values)
    if (!(s > 0.0))
      throw std::invalid_argument("gen_random_orthogonal_lowrank: singular values must be > 0");
  Rng rng(derive_seed(seed, 1));
  const Matrix gu = gaussian_matrix(L, r, 1.0, rng);
  const Matrix gv = gaussian_matrix(F, r, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qru(gu), qrv(gv);
  Matrix u = qru.householderQ() * Matrix::Identity(L, r);
  Matrix v = qrv.householderQ() * Matrix::Identity(F, r);
  Vector sv(r);
  for (int i = 0; i < r; ++i) sv[i] = singular_values[static_cast<std::size_t>(i)];
  Matrix x = u * sv.asDiagonal() * v.transpose();
  return {std::move(x), Subspaces{std::move(u), std::move(v)}};
}

std::pair<Matrix, SupportSet> gen_sparse(int F, int T, const SparsityModel& sparsity,
                                         const AmplitudeModel& amplitude, std::uint64_t seed) {
  const long total = static_cast<long>(F) * T;
  Rng rng(derive_seed(seed, 2));
  std::vector<std::pair<int, int>> idx;
  switch (sparsity.kind) {
    case SparsityModel::Kind::Bernoulli: {
      if (sparsity.pi < 0.0 || sparsity.pi > 1.0)
        throw std::invalid_argument("gen_sparse: pi must be in [0,1]");
      for (int i = 0; i < F; ++i)
        for (int j = 0; j < T; ++j)
          if (rng.bernoulli(sparsity.pi)) idx.emplace_back(i, j);
      break;
    }
    case SparsityModel::Kind::Uniform: {
      if (sparsity.s < 0 || sparsity.s > total)
        throw std::invalid_argument("gen_sparse: s must be in [0, F*T]");
      // Partial Fisher-Yates over the flat cell indices.
      std::vector<long> cells(static_cast<std::size_t>(total));
      std::iota(cells.begin(), cells.end(), 0L);
      for (long p = 0; p < sparsity.s; ++p) {
        const long q = p + static_cast<long>(rng.below(static_cast<std::uint64_t>(total - p)));
        std::swap(cells[static_cast<std::size_t>(p)], cells[static_cast<std::size_t>(q)]);
        const long cell = cells[static_cast<std::size_t>(p)];
        idx.emplace_back(static_cast<int>(cell / T), static_cast<int>(cell % T));
      }
      std::sort(idx.begin(), idx.end());
      break;
    }
  }
  if (amplitude.sd == 0.0 && !idx.empty())
    throw std::invalid_argument("gen_sparse: zero amplitude cannot realize a nonempty support");
  Matrix a = Matrix::Zero(F, T);
  for (const auto& [i, j] : idx) {
    double v = 0.0;
    // Draw until nonzero so the support is exactly the nonzero pattern.
    do {
      v = (amplitude.kind == AmplitudeModel::Kind::Signs) ? amplitude.sd * rng.sign()
                                                          : amplitude.sd * rng.gaussian();
    } while (v == 0.0);
    a(i, j) = v;
  }
  return {std::move(a), SupportSet(F, T, std::move(idx))};
}

Matrix dct_matrix(int f) {
  Matrix psi(f, f);
  const double scale = std::sqrt(2.0 / f);
  for (int t = 0; t < f; ++t) {
    const double ct = (t == 0) ? std::numbers::sqrt2 / 2.0 : 1.0;
    for (int k = 0; k < f; ++k)
      psi(t, k) = ct * scale * std::cos(std::numbers::pi * (2.0 * k + 1.0) * t / (2.0 * f));
  }
  return psi;
}

Matrix hadamard_matrix(int f) {
  if (f <= 0 || (f & (f - 1)) != 0)
    throw std::invalid_argument("hadamard_matrix: size must be a power of two");
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  for (int n = 1; n < f; n *= 2) {
    Matrix h2(2 * n, 2 * n);
    h2.topLeftCorner(n, n) = h;
    h2.topRightCorner(n, n) = h;
    h2.bottomLeftCorner(n, n) = h;
    h2.bottomRightCorner(n, n) = -h;
    h = std::move(h2);
  }
  return h / std::sqrt(static_cast<double>(f));
}

Matrix gen_compression(int L, int F, const CompressionSpec& spec, std::uint64_t seed) {
  if (L <= 0 || F <= 0 || L > F)
    throw std::invalid_argument("gen_compression: need 0 < L <= F");
  switch (spec.mode) {
    case CompressionSpec::Mode::Identity:
      if (L != F) throw std::invalid_argument("gen_compression: identity requires L == F");
      return Matrix::Identity(L, F);
    case CompressionSpec::Mode::BernoulliSvd: {
      Rng rng(derive_seed(seed, 3));
      Matrix b(L, F);
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      const SvdFactors f = svd(b);
      if (f.numerical_rank() < L)
        throw numeric_error("gen_compression: Bernoulli draw was rank deficient");
      return f.v.leftCols(L).transpose();
    }
    case CompressionSpec::Mode::BlockBounded: {
      const int ell = spec.block_rows, f = spec.block_cols;
      if (ell <= 0 || f <= 0 || ell > f || F % f != 0 || ell * (F / f) != L)
        throw std::invalid_argument(
            "gen_compression: block mode requires f | F, ell <= f and ell*(F/f) == L");
      const Matrix psi = (spec.transform == CompressionSpec::Transform::Dct)
                             ? dct_matrix(f)
                             : hadamard_matrix(f);
      const int n_b = F / f;
      Rng rng(derive_seed(seed, 4));
      Matrix r = Matrix::Zero(L, F);
      std::vector<int> rows(static_cast<std::size_t>(f));
      for (int b = 0; b < n_b; ++b) {
        // ell distinct rows of psi, uniformly without replacement
        std::iota(rows.begin(), rows.end(), 0);
        for (int p = 0; p < ell; ++p) {
          const int q = p + static_cast<int>(rng.below(static_cast<std::uint64_t>(f - p)));
          std::swap(rows[static_cast<std::size_t>(p)], rows[static_cast<std::size_t>(q)]);
          r.block(b * ell + p, b * f, 1, f) = psi.row(rows[static_cast<std::size_t>(p)]);
        }
      }
      return r;
    }
  }
  throw std::invalid_argument("gen_compression: unknown mode");
}

GroundTruth synthesize_observation(const Matrix& x0, const Matrix& a0, const Matrix& r,
                                   double noise_sd, std::uint64_t seed) {
  if (r.rows() != x0.rows() || r.cols() != a0.rows() || x0.cols() != a0.cols())
    throw std::invalid_argument("synthesize_observation: nonconformable shapes");
  if (noise_sd < 0.0) throw std::invalid_argument("synthesize_observation: negative noise_sd");
  GroundTruth g;
  g.x0 = x0;
  g.a0 = a0;
  g.r = r;
  g.y = x0 + r * a0;
  if (noise_sd > 0.0) {
    Rng rng(derive_seed(seed, 5));
    g.y += gaussian_matrix(static_cast<int>(x0.rows()), static_cast<int>(x0.cols()), noise_sd,
                           rng);
  }
  g.support = SupportSet::from_pattern(a0);
  g.spaces = subspaces_of(x0);
  return g;
}

std::pair<Matrix, Matrix> permute_transform(const Matrix& y, const Matrix& r,
                                            const std::vector<int>& row_perm,
                                            const std::vector<int>& col_perm) {
  if (y.rows() != r.rows()) throw std::invalid_argument("permute_transform: row mismatch");
  check_permutation(row_perm, y.rows(), "permute_transform rows");
  check_permutation(col_perm, r.cols(), "permute_transform cols");
  Matrix y2(y.rows(), y.cols());
  Matrix r2(r.rows(), r.cols());
  for (Eigen::Index p = 0; p < y.rows(); ++p) {
    y2.row(p) = y.row(row_perm[static_cast<std::size_t>(p)]);
    for (Eigen::Index q = 0; q < r.cols(); ++q)
      r2(p, q) = r(row_perm[static_cast<std::size_t>(p)], col_perm[static_cast<std::size_t>(q)]);
  }
  return {std::move(y2), std::move(r2)};
}

}  // namespace lrcs
