#include "lrcs/solvers.hpp"

#include <chrono>
#include <cmath>

namespace lrcs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Resolved {
  double lambda;
  double nu0;
  double nu_bar;
};

Resolved resolve(const SolverConfig& cfg, const Matrix& y, const Matrix& r) {
  Resolved out{};
  out.lambda = cfg.lambda > 0.0
                   ? cfg.lambda
                   : default_lambda(static_cast<int>(r.cols()), static_cast<int>(y.cols()));
  out.nu0 = cfg.nu0 > 0.0 ? cfg.nu0 : 0.99 * norm(y, NormKind::Spectral);
  out.nu_bar = cfg.nu_bar >= 0.0 ? cfg.nu_bar : 1e-9 * out.nu0;
  if (out.nu_bar > out.nu0) throw std::invalid_argument("SolverConfig: nu_bar > nu0");
  return out;
}

void check_shapes(const Matrix& y, const Matrix& r) {
  if (r.rows() != y.rows())
    throw std::invalid_argument("solver: R has " + std::to_string(r.rows()) +
                                " rows but Y has " + std::to_string(y.rows()));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(upsilon > 0.0 && upsilon < 1.0))
    throw std::invalid_argument("SolverConfig: upsilon must be in (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (!(penalty_c > 0.0)) throw std::invalid_argument("SolverConfig: penalty_c must be > 0");
}

double default_lambda(int F, int T) {
  if (F < 1 || T < 1) throw std::invalid_argument("default_lambda: dimensions must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(std::max(F, T)));
}

std::pair<double, double> evaluate(const Decomposition& d, const Matrix& y, const Matrix& r,
                                   double lambda) {
  check_shapes(y, r);
  require_shape(d.x_hat, y.rows(), y.cols(), "evaluate: x_hat");
  require_shape(d.a_hat, r.cols(), y.cols(), "evaluate: a_hat");
  const double obj =
      norm(d.x_hat, NormKind::Nuclear) + lambda * norm(d.a_hat, NormKind::L1Entrywise);
  const double res = (y - d.x_hat - r * d.a_hat).norm();
  return {obj, res};
}

std::pair<Decomposition, SolverReport> apg_solve(const Matrix& y, const Matrix& r,
                                                 const SolverConfig& cfg) {
  cfg.validate();
  check_shapes(y, r);
  require_finite(y, "apg_solve: y");
  require_finite(r, "apg_solve: r");
  const auto t0 = Clock::now();
  const auto [lambda, nu0, nu_bar] = resolve(cfg, y, r);
  const double lf = lipschitz_constant(r);
  const double y_scale = std::max(1.0, y.norm());

  const Eigen::Index L = y.rows(), T = y.cols(), F = r.cols();
  Matrix x = Matrix::Zero(L, T), x_prev = x;
  Matrix a = Matrix::Zero(F, T), a_prev = a;
  double t_cur = 1.0, t_prev = 1.0;
  double nu = nu0;

  SolverReport rep;
  rep.lambda_used = lambda;
  rep.stop_reason = StopReason::MaxIter;

  for (long k = 0; k < cfg.max_iter; ++k) {
    const double w = (t_prev - 1.0) / t_cur;
    const Matrix tx = x + w * (x - x_prev);
    const Matrix ta = a + w * (a - a_prev);
    const Matrix resid_t = y - tx - r * ta;  // -(gradient of f at T, X block)
    const Matrix gx = tx + (1.0 / lf) * resid_t;
    const Matrix ga = ta + (1.0 / lf) * (r.transpose() * resid_t);

    Vector sig;
    const Matrix x_next = svt(svd(gx), nu / lf, &sig);
    const Matrix a_next = soft_threshold(ga, lambda * nu / lf);

    // Z[k+1] bounds the subgradient distance of the (P2) cost at S[k+1].
    const Matrix d = (x_next - tx) + r * (a_next - ta);
    const double znorm = std::sqrt((lf * (tx - x_next) + d).squaredNorm() +
                                   (lf * (ta - a_next) + r.transpose() * d).squaredNorm());
    const double x_norm_prev = x.norm();

    rep.objective_trace.push_back(sig.sum() + lambda * norm(a_next, NormKind::L1Entrywise));
    rep.residual_trace.push_back((y - x_next - r * a_next).norm() / y_scale);

    x_prev = x;
    x = x_next;
    a_prev = a;
    a = a_next;
    t_prev = t_cur;
    t_cur = (1.0 + std::sqrt(4.0 * t_cur * t_cur + 1.0)) / 2.0;
    nu = std::max(cfg.upsilon * nu, nu_bar);
    rep.iterations = k + 1;

    // The surrogate only certifies stationarity of the target problem, so the
    // tolerance stop waits for the continuation to bottom out at nu_bar.
    if (nu <= nu_bar && znorm <= cfg.tol * std::max(1.0, lf * x_norm_prev)) {
      rep.stop_reason = StopReason::Tolerance;
      break;
    }
  }
  rep.wall_time_seconds = seconds_since(t0);
  return {Decomposition{std::move(x), std::move(a)}, std::move(rep)};
}

namespace {

// (R'R + I_F)^{-1} applied through the matrix inversion lemma:
// I_F - V_R diag(sigma_i^2/(1+sigma_i^2)) V_R'. Computed once per solve.
class RtrPlusIdentityInverse {
 public:
  explicit RtrPlusIdentityInverse(const Matrix& r) {
    const SvdFactors f = svd(r);
    v_ = f.v;
    shrink_ = (f.sigma.array().square() / (1.0 + f.sigma.array().square())).matrix();
  }

  Matrix apply(const Matrix& m) const {
    return m - v_ * (shrink_.asDiagonal() * (v_.transpose() * m));
  }

 private:
  Matrix v_;
  Vector shrink_;
};

std::pair<Decomposition, SolverReport> admm_core(const Matrix& y, const Matrix& r,
                                                 const SolverConfig& cfg, bool freeze_x) {
  cfg.validate();
  check_shapes(y, r);
  require_finite(y, "admm_solve: y");
  require_finite(r, "admm_solve: r");
  const auto t0 = Clock::now();
  const auto resolved = resolve(cfg, y, r);
  const double lambda = resolved.lambda;
  const double c = cfg.penalty_c;
  const double scale = std::max(1.0, y.norm());

  const Eigen::Index L = y.rows(), T = y.cols(), F = r.cols();
  const RtrPlusIdentityInverse inv(r);

  Matrix x = Matrix::Zero(L, T);
  Matrix a = Matrix::Zero(F, T), b = a, mt = a;  // M-tilde lives with A/B
  Matrix mb = Matrix::Zero(L, T);                // M-bar with the data constraint

  SolverReport rep;
  rep.lambda_used = lambda;
  rep.stop_reason = StopReason::MaxIter;

  for (long k = 0; k < cfg.max_iter; ++k) {
    // [S1] dual ascent
    mt += c * (b - a);
    mb += c * (y - x - r * b);

    // [S2] X via singular value thresholding, A via soft-thresholding
    double x_nuclear = 0.0;
    if (!freeze_x) {
      Vector sig;
      x = svt(svd(y - r * a + mb / c), 1.0 / c, &sig);
      x_nuclear = sig.sum();
    }
    a = (1.0 / c) * soft_threshold(mt + c * b, lambda);

    // [S3] B solves the strictly convex quadratic (R'R + I) B = rhs
    const Matrix b_next =
        a + inv.apply(r.transpose() * (y - x - r * a) - (mt - r.transpose() * mb) / c);

    const double primal = (y - x - r * b_next).norm() + (a - b_next).norm();
    const double dual = c * (b_next - b).norm();
    b = b_next;

    rep.objective_trace.push_back(x_nuclear + lambda * norm(a, NormKind::L1Entrywise));
    rep.residual_trace.push_back(primal / scale);
    rep.iterations = k + 1;

    if (primal <= cfg.tol * scale && dual <= cfg.tol * scale) {
      rep.stop_reason = StopReason::Tolerance;
      break;
    }
  }
  rep.wall_time_seconds = seconds_since(t0);
  return {Decomposition{std::move(x), std::move(a)}, std::move(rep)};
}

}  // namespace

std::pair<Decomposition, SolverReport> admm_solve(const Matrix& y, const Matrix& r,
                                                  const SolverConfig& cfg) {
  return admm_core(y, r, cfg, /*freeze_x=*/false);
}

std::pair<Decomposition, SolverReport> ls_pcp_baseline(const Matrix& y, const Matrix& r,
                                                       const SolverConfig& cfg) {
  check_shapes(y, r);
  const SvdFactors f = svd(r);
  const Eigen::Index L = r.rows();
  if (f.sigma.size() < L || !(f.sigma[L - 1] > 1e-10 * f.sigma[0]))
    throw numeric_error("ls_pcp_baseline: R is not full row rank");
  // yhat = pinv(R) y = V diag(1/sigma) U' y
  const Matrix yhat =
      f.v.leftCols(L) * f.sigma.head(L).cwiseInverse().asDiagonal() * f.u.transpose() * y;
  const Matrix eye = Matrix::Identity(r.cols(), r.cols());
  return apg_solve(yhat, eye, cfg);
}

std::pair<Matrix, SolverReport> cs_solve(const Matrix& y, const Matrix& r,
                                         const SolverConfig& cfg) {
  auto [dec, rep] = admm_core(y, r, cfg, /*freeze_x=*/true);
  return {std::move(dec.a_hat), std::move(rep)};
}

std::string to_string(StopReason r) {
  return r == StopReason::Tolerance ? "tolerance" : "max_iter";
}

}  // namespace lrcs
