#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrcs/solvers.hpp"

namespace lrcs {

enum class SolverChoice { Apg, Admm };

// Phase-transition grid over (rank, sparsity). The sparsity axis is either a
// list of exact support sizes (uniform model) or of Bernoulli probabilities.
struct GridConfig {
  int L = 0, F = 0, T = 0;
  std::vector<int> r_values;
  std::vector<double> s_values;  // support sizes or probabilities, see s_is_pi
  bool s_is_pi = false;
  int reps = 3;
  std::uint64_t base_seed = 0;
  SolverChoice solver = SolverChoice::Apg;
  double success_threshold = 1e-3;
  double tol = 1e-8;
  long max_iter = 10000;

  void validate() const;
};

struct GridCell {
  int r = 0;
  double s = 0.0;
  double mean_rel_error = 0.0;
  double success_fraction = 0.0;
  double mean_iters = 0.0;
  double mean_seconds = 0.0;
};

struct GridResult {
  std::vector<GridCell> cells;  // ordered by (r index, s index)
};

// Per-cell seed: base_seed + stable hash of (r, s, rep), so any cell can be
// reproduced in isolation.
std::uint64_t cell_seed(std::uint64_t base_seed, int r, double s, int rep);

// Relative error ||a_hat - a0||_F / ||a0||_F with the degenerate convention
// e_r = 0 when a0 = 0 and ||a_hat||_F <= 1e-6 (else the absolute norm).
double relative_error(const Matrix& a_hat, const Matrix& a0);

// One grid cell in isolation (also the unit the batch runner executes).
GridCell run_grid_cell(const GridConfig& cfg, int r, double s);

GridResult phase_grid(const GridConfig& cfg, int jobs = 1);

// Table-2-style compression sweep: vary L over fractions of F at fixed
// (rank, pi).
struct SweepConfig {
  int F = 210, T = 420;
  int rank = 10;
  double pi = 0.05;
  std::vector<int> l_values;  // empty: {F, F/2, F/3, F/5}
  int reps = 1;
  std::uint64_t base_seed = 0;
  double tol = 1e-8;
  long max_iter = 10000;
};

struct SweepRow {
  int L = 0;
  double mean_rank_xhat = 0.0;
  double mean_nnz_ahat = 0.0;  // counted above 1e-6 * max|a_hat|
  double mean_rel_error = 0.0;
};

std::vector<SweepRow> compression_sweep(const SweepConfig& cfg, int jobs = 1);

// Table-3-style comparison of LS-PCP against the APG solver.
struct BaselineConfig {
  int L = 105, F = 210, T = 420;
  std::vector<int> r_values{5, 10};
  std::vector<double> pi_values{0.01, 0.05};
  int reps = 1;
  std::uint64_t base_seed = 0;
  double tol = 1e-8;
  long max_iter = 10000;
};

struct BaselineRow {
  int r = 0;
  double pi = 0.0;
  double lspcp_error = 0.0;
  double apg_error = 0.0;
};

std::vector<BaselineRow> baseline_table(const BaselineConfig& cfg, int jobs = 1);

enum class ResultFormat { Csv, Json };

void write_results(const GridResult& result, const std::string& path, ResultFormat format);
GridResult read_grid_results(const std::string& path, ResultFormat format);

void write_results(const std::vector<SweepRow>& rows, const std::string& path,
                   ResultFormat format);
void write_results(const std::vector<BaselineRow>& rows, const std::string& path,
                   ResultFormat format);

GridConfig parse_grid_config_json(const std::string& text);
GridConfig load_grid_config(const std::string& path);

}  // namespace lrcs
