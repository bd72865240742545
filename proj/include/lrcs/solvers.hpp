#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lrcs/matcore.hpp"

namespace lrcs {

// Tuning knobs for both solvers. Negative values mean "derive the default
// from the data": lambda = 1/sqrt(max(F,T)), nu0 = 0.99*||Y||,
// nu_bar = 1e-9*nu0.
struct SolverConfig {
  double lambda = -1.0;    // sparsity weight
  double nu0 = -1.0;       // initial penalty (APG continuation)
  double nu_bar = -1.0;    // target penalty
  double upsilon = 0.9;    // continuation factor, in (0,1)
  double tol = 1e-8;       // stopping tolerance
  long max_iter = 10000;
  double penalty_c = 1.0;  // AD-MoM augmented-Lagrangian coefficient

  void validate() const;
};

enum class StopReason { Tolerance, MaxIter };

struct SolverReport {
  long iterations = 0;
  // Per iteration: (P1) objective ||X||_* + lambda*||A||_1 and the relative
  // feasibility residual used by the stopping logic.
  std::vector<double> objective_trace;
  std::vector<double> residual_trace;
  StopReason stop_reason = StopReason::Tolerance;
  double wall_time_seconds = 0.0;
  double lambda_used = 0.0;
};

struct Decomposition {
  Matrix x_hat;  // L x T
  Matrix a_hat;  // F x T
};

// PCP-style default for the sparsity weight; the analysis proves a valid
// interval exists but the experiments never pin a value.
double default_lambda(int F, int T);

// ((P1) objective, feasibility residual ||y - x - r*a||_F).
std::pair<double, double> evaluate(const Decomposition& d, const Matrix& y, const Matrix& r,
                                   double lambda);

// Accelerated proximal gradient on the penalized problem (P2) with geometric
// continuation on nu.
std::pair<Decomposition, SolverReport> apg_solve(const Matrix& y, const Matrix& r,
                                                 const SolverConfig& cfg);

// Alternating-direction method of multipliers on the split problem (P3).
std::pair<Decomposition, SolverReport> admm_solve(const Matrix& y, const Matrix& r,
                                                  const SolverConfig& cfg);

// Least-squares + PCP baseline: yhat = pinv(R)*y, then APG with R = I_F.
std::pair<Decomposition, SolverReport> ls_pcp_baseline(const Matrix& y, const Matrix& r,
                                                       const SolverConfig& cfg);

// Pure l1 recovery (X frozen at zero): min ||A||_1 s.to Y = RA.
std::pair<Matrix, SolverReport> cs_solve(const Matrix& y, const Matrix& r,
                                         const SolverConfig& cfg);

std::string to_string(StopReason r);

}  // namespace lrcs
