#include "lrcs/expharness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "lrcs/ensembles.hpp"
#include "lrcs/io.hpp"
#include "lrcs/rng.hpp"

namespace lrcs {

namespace {

using nlohmann::json;

// Runs fn(0..count-1) on up to `jobs` worker threads; outputs land by index,
// so scheduling cannot change results.
template <typename Fn>
void parallel_for(long count, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::future<void>> workers;
  const int n_workers = static_cast<int>(std::min<long>(jobs, count));
  workers.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w)
    workers.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    }));
  for (auto& w : workers) w.get();
}

std::uint64_t double_bits(double v) {
  std::uint64_t out = 0;
  std::memcpy(&out, &v, sizeof(out));
  return out;
}

struct InstanceResult {
  double rel_error = 0.0;
  double iters = 0.0;
  double seconds = 0.0;
  double rank_xhat = 0.0;
  double nnz_ahat = 0.0;
  bool solver_failed = false;
};

// One synthetic recovery instance in the experiment style: bilinear X0,
// sign-sparse A0, row-orthonormalized Bernoulli R.
InstanceResult run_instance(int L, int F, int T, int rank, double s, bool s_is_pi,
                            SolverChoice solver, double tol, long max_iter,
                            std::uint64_t seed) {
  InstanceResult out;
  try {
    const Matrix x0 = gen_bilinear_lowrank(L, T, rank, derive_seed(seed, 20));
    const SparsityModel sm = s_is_pi ? SparsityModel::bernoulli(s)
                                     : SparsityModel::uniform(static_cast<long>(s + 0.5));
    const auto [a0, support] = gen_sparse(F, T, sm, AmplitudeModel::signs(), derive_seed(seed, 21));
    const Matrix r =
        gen_compression(L, F, CompressionSpec::bernoulli_svd(), derive_seed(seed, 22));
    const Matrix y = x0 + r * a0;

    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    const auto [dec, rep] = solver == SolverChoice::Apg ? apg_solve(y, r, cfg)
                                                        : admm_solve(y, r, cfg);
    out.rel_error = relative_error(dec.a_hat, a0);
    out.iters = static_cast<double>(rep.iterations);
    out.seconds = rep.wall_time_seconds;
    out.rank_xhat = static_cast<double>(svd(dec.x_hat).numerical_rank());
    const double cutoff = 1e-6 * (dec.a_hat.size() ? dec.a_hat.cwiseAbs().maxCoeff() : 0.0);
    out.nnz_ahat =
        static_cast<double>((dec.a_hat.cwiseAbs().array() > cutoff).count());
  } catch (const numeric_error&) {
    out.solver_failed = true;  // recorded per cell, not fatal
    out.rel_error = 1.0;
  }
  return out;
}

}  // namespace

void GridConfig::validate() const {
  if (L < 1 || F < 1 || T < 1 || L > F)
    throw std::invalid_argument("GridConfig: need 1 <= L <= F and T >= 1");
  if (r_values.empty() || s_values.empty())
    throw std::invalid_argument("GridConfig: value lists must be nonempty");
  if (reps < 1) throw std::invalid_argument("GridConfig: reps must be >= 1");
  if (!(success_threshold > 0.0))
    throw std::invalid_argument("GridConfig: success_threshold must be > 0");
}

std::uint64_t cell_seed(std::uint64_t base_seed, int r, double s, int rep) {
  std::uint64_t h = Rng::mix(static_cast<std::uint64_t>(r));
  h = Rng::mix(h ^ double_bits(s));
  h = Rng::mix(h ^ static_cast<std::uint64_t>(rep));
  return base_seed + h;
}

double relative_error(const Matrix& a_hat, const Matrix& a0) {
  const double denom = a0.norm();
  const double diff = (a_hat - a0).norm();
  if (denom == 0.0) return a_hat.norm() <= 1e-6 ? 0.0 : a_hat.norm();
  return diff / denom;
}

GridCell run_grid_cell(const GridConfig& cfg, int r, double s) {
  GridCell cell;
  cell.r = r;
  cell.s = s;
  long successes = 0;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    const InstanceResult res =
        run_instance(cfg.L, cfg.F, cfg.T, r, s, cfg.s_is_pi, cfg.solver, cfg.tol, cfg.max_iter,
                     cell_seed(cfg.base_seed, r, s, rep));
    cell.mean_rel_error += res.rel_error / cfg.reps;
    cell.mean_iters += res.iters / cfg.reps;
    cell.mean_seconds += res.seconds / cfg.reps;
    if (!res.solver_failed && res.rel_error <= cfg.success_threshold) ++successes;
  }
  cell.success_fraction = static_cast<double>(successes) / cfg.reps;
  return cell;
}

GridResult phase_grid(const GridConfig& cfg, int jobs) {
  cfg.validate();
  GridResult result;
  result.cells.resize(cfg.r_values.size() * cfg.s_values.size());
  const long n_s = static_cast<long>(cfg.s_values.size());
  parallel_for(static_cast<long>(result.cells.size()), jobs, [&](long i) {
    const int r = cfg.r_values[static_cast<std::size_t>(i / n_s)];
    const double s = cfg.s_values[static_cast<std::size_t>(i % n_s)];
    result.cells[static_cast<std::size_t>(i)] = run_grid_cell(cfg, r, s);
  });
  return result;
}

std::vector<SweepRow> compression_sweep(const SweepConfig& cfg, int jobs) {
  std::vector<int> l_values = cfg.l_values;
  if (l_values.empty()) l_values = {cfg.F, cfg.F / 2, cfg.F / 3, cfg.F / 5};
  struct Job {
    int L;
    int rep;
  };
  std::vector<Job> jobs_list;
  for (int L : l_values)
    for (int rep = 0; rep < cfg.reps; ++rep) jobs_list.push_back({L, rep});
  std::vector<InstanceResult> results(jobs_list.size());
  parallel_for(static_cast<long>(jobs_list.size()), jobs, [&](long i) {
    const auto [L, rep] = jobs_list[static_cast<std::size_t>(i)];
    results[static_cast<std::size_t>(i)] =
        run_instance(L, cfg.F, cfg.T, cfg.rank, cfg.pi, /*s_is_pi=*/true, SolverChoice::Apg,
                     cfg.tol, cfg.max_iter, cell_seed(cfg.base_seed, L, cfg.pi, rep));
  });
  std::vector<SweepRow> rows;
  for (std::size_t li = 0; li < l_values.size(); ++li) {
    SweepRow row;
    row.L = l_values[li];
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const auto& res = results[li * static_cast<std::size_t>(cfg.reps) +
                                static_cast<std::size_t>(rep)];
      row.mean_rank_xhat += res.rank_xhat / cfg.reps;
      row.mean_nnz_ahat += res.nnz_ahat / cfg.reps;
      row.mean_rel_error += res.rel_error / cfg.reps;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<BaselineRow> baseline_table(const BaselineConfig& cfg, int jobs) {
  struct Job {
    int r;
    double pi;
    int rep;
    bool lspcp;
  };
  std::vector<Job> jobs_list;
  for (int r : cfg.r_values)
    for (double pi : cfg.pi_values)
      for (int rep = 0; rep < cfg.reps; ++rep) {
        jobs_list.push_back({r, pi, rep, false});
        jobs_list.push_back({r, pi, rep, true});
      }
  std::vector<double> errors(jobs_list.size());
  parallel_for(static_cast<long>(jobs_list.size()), jobs, [&](long i) {
    const auto [r, pi, rep, lspcp] = jobs_list[static_cast<std::size_t>(i)];
    const std::uint64_t seed = cell_seed(cfg.base_seed, r, pi, rep);
    const Matrix x0 = gen_bilinear_lowrank(cfg.L, cfg.T, r, derive_seed(seed, 20));
    const auto [a0, support] = gen_sparse(cfg.F, cfg.T, SparsityModel::bernoulli(pi),
                                          AmplitudeModel::signs(), derive_seed(seed, 21));
    const Matrix rmat =
        gen_compression(cfg.L, cfg.F, CompressionSpec::bernoulli_svd(), derive_seed(seed, 22));
    const Matrix y = x0 + rmat * a0;
    SolverConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iter = cfg.max_iter;
    const auto [dec, rep_] = lspcp ? ls_pcp_baseline(y, rmat, scfg) : apg_solve(y, rmat, scfg);
    errors[static_cast<std::size_t>(i)] = relative_error(dec.a_hat, a0);
  });
  std::vector<BaselineRow> rows;
  std::size_t at = 0;
  for (int r : cfg.r_values)
    for (double pi : cfg.pi_values) {
      BaselineRow row;
      row.r = r;
      row.pi = pi;
      for (int rep = 0; rep < cfg.reps; ++rep) {
        row.apg_error += errors[at++] / cfg.reps;
        row.lspcp_error += errors[at++] / cfg.reps;
      }
      rows.push_back(row);
    }
  return rows;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw io_error(path + ": write failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_results(const GridResult& result, const std::string& path, ResultFormat format) {
  if (format == ResultFormat::Csv) {
    std::string text = "r,s,mean_rel_error,success_fraction,mean_iters,mean_seconds\n";
    for (const auto& c : result.cells)
      text += std::to_string(c.r) + "," + fmt17(c.s) + "," + fmt17(c.mean_rel_error) + "," +
              fmt17(c.success_fraction) + "," + fmt17(c.mean_iters) + "," +
              fmt17(c.mean_seconds) + "\n";
    write_text(path, text);
    return;
  }
  json cells = json::array();
  for (const auto& c : result.cells)
    cells.push_back({{"r", c.r},
                     {"s", c.s},
                     {"mean_rel_error", c.mean_rel_error},
                     {"success_fraction", c.success_fraction},
                     {"mean_iters", c.mean_iters},
                     {"mean_seconds", c.mean_seconds}});
  write_text(path, json{{"cells", cells}}.dump(2) + "\n");
}

GridResult read_grid_results(const std::string& path, ResultFormat format) {
  GridResult out;
  const std::string text = read_text(path);
  if (format == ResultFormat::Csv) {
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (header) {
        header = false;
        continue;
      }
      GridCell c;
      if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf", &c.r, &c.s, &c.mean_rel_error,
                      &c.success_fraction, &c.mean_iters, &c.mean_seconds) != 6)
        throw io_error(path + ": malformed grid row '" + line + "'");
      out.cells.push_back(c);
    }
    return out;
  }
  const json j = json::parse(text);
  for (const auto& c : j.at("cells")) {
    GridCell cell;
    cell.r = c.at("r").get<int>();
    cell.s = c.at("s").get<double>();
    cell.mean_rel_error = c.at("mean_rel_error").get<double>();
    cell.success_fraction = c.at("success_fraction").get<double>();
    cell.mean_iters = c.at("mean_iters").get<double>();
    cell.mean_seconds = c.at("mean_seconds").get<double>();
    out.cells.push_back(cell);
  }
  return out;
}

void write_results(const std::vector<SweepRow>& rows, const std::string& path,
                   ResultFormat format) {
  if (format == ResultFormat::Csv) {
    std::string text = "L,mean_rank_xhat,mean_nnz_ahat,mean_rel_error\n";
    for (const auto& r : rows)
      text += std::to_string(r.L) + "," + fmt17(r.mean_rank_xhat) + "," +
              fmt17(r.mean_nnz_ahat) + "," + fmt17(r.mean_rel_error) + "\n";
    write_text(path, text);
    return;
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"L", r.L},
                   {"mean_rank_xhat", r.mean_rank_xhat},
                   {"mean_nnz_ahat", r.mean_nnz_ahat},
                   {"mean_rel_error", r.mean_rel_error}});
  write_text(path, json{{"rows", arr}}.dump(2) + "\n");
}

void write_results(const std::vector<BaselineRow>& rows, const std::string& path,
                   ResultFormat format) {
  if (format == ResultFormat::Csv) {
    std::string text = "r,pi,lspcp_error,apg_error\n";
    for (const auto& r : rows)
      text += std::to_string(r.r) + "," + fmt17(r.pi) + "," + fmt17(r.lspcp_error) + "," +
              fmt17(r.apg_error) + "\n";
    write_text(path, text);
    return;
  }
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"r", r.r},
                   {"pi", r.pi},
                   {"lspcp_error", r.lspcp_error},
                   {"apg_error", r.apg_error}});
  write_text(path, json{{"rows", arr}}.dump(2) + "\n");
}

GridConfig parse_grid_config_json(const std::string& text) {
  const json j = json::parse(text);
  GridConfig cfg;
  cfg.L = j.at("L").get<int>();
  cfg.F = j.at("F").get<int>();
  cfg.T = j.at("T").get<int>();
  cfg.r_values = j.at("r_values").get<std::vector<int>>();
  if (j.contains("pi_values") == j.contains("s_values"))
    throw io_error("grid config: exactly one of s_values / pi_values is required");
  if (j.contains("pi_values")) {
    cfg.s_values = j.at("pi_values").get<std::vector<double>>();
    cfg.s_is_pi = true;
  } else {
    cfg.s_values = j.at("s_values").get<std::vector<double>>();
    cfg.s_is_pi = false;
  }
  if (j.contains("reps")) cfg.reps = j.at("reps").get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("solver")) {
    const std::string s = j.at("solver").get<std::string>();
    if (s == "apg")
      cfg.solver = SolverChoice::Apg;
    else if (s == "admm")
      cfg.solver = SolverChoice::Admm;
    else
      throw io_error("grid config: unknown solver '" + s + "'");
  }
  if (j.contains("success_threshold"))
    cfg.success_threshold = j.at("success_threshold").get<double>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<long>();
  return cfg;
}

GridConfig load_grid_config(const std::string& path) {
  return parse_grid_config_json(read_text(path));
}

}  // namespace lrcs
