#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lrcs/io.hpp"
#include "lrcs/matcore.hpp"
#include "lrcs/rng.hpp"

using namespace lrcs;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

Subspaces axis_subspaces(int L, int T, int axis_u, int axis_v) {
  Matrix u = Matrix::Zero(L, 1);
  Matrix v = Matrix::Zero(T, 1);
  u(axis_u, 0) = 1.0;
  v(axis_v, 0) = 1.0;
  return Subspaces{u, v};
}

// Independent prox oracle: plain (sub)gradient descent on
// 0.5*||X - m||_F^2 + tau*||X||_*. Instances are chosen with
// tau < sigma_min(m) so the optimum stays full rank and the subgradient is a
// gradient along the whole path.
Matrix prox_subgradient_oracle(const Matrix& m, double tau) {
  Matrix x = m;
  const double step = 0.1;
  for (int it = 0; it < 4000; ++it) {
    const SvdFactors f = svd(x);
    const Matrix grad = (x - m) + tau * f.u * f.v.transpose();
    x -= step * grad;
  }
  return x;
}

// Largest residual of the subgradient membership conditions for
// (m - X)/tau being in the nuclear-norm subdifferential at X.
double svt_optimality_residual(const Matrix& m, const Matrix& x, double tau) {
  const Matrix d = (m - x) / tau;
  const SvdFactors f = svd(x);
  const int q = f.numerical_rank();
  const Matrix u1 = f.u.leftCols(q);
  const Matrix v1 = f.v.leftCols(q);
  const Matrix core = u1.transpose() * d * v1;
  double res = (core - Matrix::Identity(q, q)).norm();
  const Matrix left = d * v1 - u1 * core;                       // (I-P_U) D V1
  const Matrix right = u1.transpose() * d - core * v1.transpose();  // U1' D (I-P_V)
  res = std::max(res, left.norm());
  res = std::max(res, right.norm());
  const Matrix outer = d - u1 * (u1.transpose() * d) - (d * v1) * v1.transpose() +
                       u1 * core * v1.transpose();
  res = std::max(res, std::max(0.0, norm(outer, NormKind::Spectral) - 1.0));
  return res;
}

}  // namespace

TEST_CASE("svd on diagonal and zero matrices") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const SvdFactors f = svd(d);
  CHECK(f.sigma[0] == doctest::Approx(3.0));
  CHECK(f.sigma[1] == doctest::Approx(1.0));
  CHECK(f.sigma[2] == doctest::Approx(0.0));
  CHECK(f.numerical_rank() == 2);

  const SvdFactors z = svd(Matrix::Zero(4, 2));
  CHECK(z.sigma.maxCoeff() == 0.0);
  CHECK(z.numerical_rank() == 0);
}

TEST_CASE("svd reconstruction and orthonormality") {
  const Matrix m = random_matrix(8, 5, 42);
  const SvdFactors f = svd(m);
  const Matrix rec = f.u * f.sigma.asDiagonal() * f.v.transpose();
  CHECK((rec - m).norm() <= 1e-8 * m.norm());
  CHECK((f.u.transpose() * f.u - Matrix::Identity(5, 5)).norm() <= 1e-10);
  CHECK((f.v.transpose() * f.v - Matrix::Identity(5, 5)).norm() <= 1e-10);
  for (int i = 0; i + 1 < f.sigma.size(); ++i) CHECK(f.sigma[i] >= f.sigma[i + 1]);
}

TEST_CASE("norm examples") {
  Matrix m(1, 2);
  m << 3, 4;
  CHECK(norm(m, NormKind::Frobenius) == doctest::Approx(5.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  CHECK(norm(d, NormKind::Nuclear) == doctest::Approx(5.0));

  Matrix a(2, 2);
  a << 1, -2, 0, 3;
  CHECK(norm(a, NormKind::InducedInf) == doctest::Approx(3.0));
  CHECK(norm(a, NormKind::InducedOne) == doctest::Approx(5.0));
  CHECK(norm(a, NormKind::LinfEntrywise) == doctest::Approx(3.0));
  CHECK(norm(a, NormKind::L1Entrywise) == doctest::Approx(6.0));
}

TEST_CASE("norm ordering: nuclear >= frobenius >= spectral") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Matrix m = random_matrix(6, 9, 100 + seed);
    const double nuc = norm(m, NormKind::Nuclear);
    const double fro = norm(m, NormKind::Frobenius);
    const double spec = norm(m, NormKind::Spectral);
    CHECK(nuc >= fro - 1e-10);
    CHECK(fro >= spec - 1e-10);
  }
}

TEST_CASE("soft threshold definition and edge cases") {
  Matrix m(1, 2);
  m << 2.5, -0.5;
  const Matrix s = soft_threshold(m, 1.0);
  CHECK(s(0, 0) == doctest::Approx(1.5));
  CHECK(s(0, 1) == doctest::Approx(0.0));

  const Matrix r = random_matrix(4, 4, 7);
  CHECK((soft_threshold(r, 0.0) - r).norm() == 0.0);
  CHECK_THROWS_AS(soft_threshold(r, -0.1), std::invalid_argument);
}

TEST_CASE("soft threshold and svt are nonexpansive") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Matrix m = random_matrix(5, 7, 200 + seed);
    const Matrix n = random_matrix(5, 7, 300 + seed);
    const double tau = 0.4;
    CHECK((soft_threshold(m, tau) - soft_threshold(n, tau)).norm() <= (m - n).norm() + 1e-12);
    CHECK((svt(m, tau) - svt(n, tau)).norm() <= (m - n).norm() + 1e-9);
  }
}

TEST_CASE("svt on diagonal matrix and at tau = 0") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Matrix t = svt(d, 2.0);
  CHECK(t(0, 0) == doctest::Approx(1.0));
  CHECK(std::abs(t(1, 1)) <= 1e-12);

  const Matrix m = random_matrix(6, 4, 9);
  CHECK((svt(m, 0.0) - m).norm() <= 1e-8 * m.norm());
}

TEST_CASE("svt agrees with a projected-subgradient oracle on 3x3 instances") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    // Construct m with sigma_min safely above tau, keeping the oracle smooth.
    const Matrix q1 = svd(random_matrix(3, 3, 400 + seed)).u;
    const Matrix q2 = svd(random_matrix(3, 3, 500 + seed)).u;
    Vector sv(3);
    sv << 1.5, 1.0, 0.6;
    const Matrix m = q1 * sv.asDiagonal() * q2.transpose();
    const double tau = 0.25;
    const Matrix via_svt = svt(m, tau);
    const Matrix via_oracle = prox_subgradient_oracle(m, tau);
    CHECK((via_svt - via_oracle).norm() <= 1e-5);
  }
}

TEST_CASE("svt output satisfies first-order optimality (subgradient membership)") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix m = random_matrix(5, 4, 600 + seed);
    for (double tau : {0.3, 1.0}) {  // 1.0 drops singular values
      const Matrix x = svt(m, tau);
      if (svd(x).numerical_rank() == 0) continue;
      CHECK(svt_optimality_residual(m, x, tau) <= 1e-6);
    }
  }
}

TEST_CASE("proj_phi on axis subspaces") {
  const Subspaces s = axis_subspaces(3, 3, 0, 0);
  Matrix e22 = Matrix::Zero(3, 3);
  e22(1, 1) = 1.0;
  CHECK(proj_phi(e22, s).norm() == doctest::Approx(0.0));

  Matrix e12 = Matrix::Zero(3, 3);
  e12(0, 1) = 1.0;
  CHECK((proj_phi(e12, s) - e12).norm() <= 1e-12);
}

TEST_CASE("projector identities: idempotent, self-adjoint, partition") {
  Rng rng(11);
  const Matrix basis = random_matrix(6, 2, 12);
  const Subspaces s{svd(basis).u.leftCols(2), svd(random_matrix(8, 2, 13)).u.leftCols(2)};
  const Matrix m = random_matrix(6, 8, 14);
  const Matrix n = random_matrix(6, 8, 15);

  const Matrix pm = proj_phi(m, s);
  CHECK((proj_phi(pm, s) - pm).norm() <= 1e-10);
  // self-adjoint: <P(m), n> == <m, P(n)>
  const double lhs = (pm.array() * n.array()).sum();
  const double rhs = (m.array() * proj_phi(n, s).array()).sum();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  CHECK((proj_phi(m, s) + proj_phi(m, s, true) - m).norm() <= 1e-12 * std::max(1.0, m.norm()));

  SupportSet supp(6, 8, {{0, 0}, {2, 3}, {5, 7}});
  const Matrix pom = proj_omega(m, supp);
  CHECK((proj_omega(pom, supp) - pom).norm() == 0.0);
  const double lhs_o = (pom.array() * n.array()).sum();
  const double rhs_o = (m.array() * proj_omega(n, supp).array()).sum();
  CHECK(lhs_o == doctest::Approx(rhs_o).epsilon(1e-12));
  CHECK((proj_omega(m, supp) + proj_omega(m, supp, true) - m).norm() == 0.0);
}

TEST_CASE("proj_omega full and empty support") {
  const Matrix m = random_matrix(3, 4, 21);
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) all.emplace_back(i, j);
  CHECK((proj_omega(m, SupportSet(3, 4, all)) - m).norm() == 0.0);
  CHECK(proj_omega(m, SupportSet(3, 4, {})).norm() == 0.0);
}

TEST_CASE("support set validation and counts") {
  CHECK_THROWS_AS(SupportSet(2, 2, {{0, 0}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SupportSet(2, 2, {{2, 0}}), std::invalid_argument);
  const SupportSet s(4, 5, {{0, 0}, {0, 1}, {2, 1}});
  CHECK(s.max_row_count() == 2);
  CHECK(s.max_col_count() == 2);
  CHECK(s.contains(2, 1));
  CHECK(!s.contains(1, 1));
}

TEST_CASE("lipschitz constant") {
  // orthonormal rows: R R' = I so the constant is 2
  Matrix r(2, 4);
  r.setZero();
  r(0, 0) = 1.0;
  r(1, 1) = 1.0;
  CHECK(lipschitz_constant(r) == doctest::Approx(2.0));
  CHECK(lipschitz_constant(Matrix::Zero(3, 5)) == doctest::Approx(1.0));

  const Matrix rr = random_matrix(4, 8, 33);
  Matrix stacked(4, 12);
  stacked << Matrix::Identity(4, 4), rr;
  Eigen::SelfAdjointEigenSolver<Matrix> es(stacked.transpose() * stacked);
  CHECK(std::abs(lipschitz_constant(rr) - es.eigenvalues().maxCoeff()) <= 1e-10);
}

TEST_CASE("csv parse, format and errors") {
  const Matrix m = parse_csv("1,2\n3,4\n", "inline");
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 3.0);

  CHECK_THROWS_WITH_AS(parse_csv("1,2\n3\n", "inline"),
                       doctest::Contains("line 2"), io_error);
  CHECK_THROWS_AS(parse_csv("1,abc\n", "inline"), io_error);
  CHECK_THROWS_AS(parse_csv("1,inf\n", "inline"), io_error);
  CHECK_THROWS_AS(parse_csv("", "inline"), io_error);
}

TEST_CASE("csv round trip is bit exact") {
  const Matrix m = random_matrix(7, 3, 77) * 1e-3;
  const Matrix back = parse_csv(format_csv(m), "inline");
  CHECK((back - m).norm() == 0.0);
  CHECK(format_csv(back) == format_csv(m));
}
