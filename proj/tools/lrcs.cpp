// Command-line front end: every operation of the library behind one binary
// with bit-stable file I/O. Exit codes: 0 success, 1 usage error, 2 numeric
// failure, 3 I/O error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrcs/certificate.hpp"
#include "lrcs/diagnostics.hpp"
#include "lrcs/ensembles.hpp"
#include "lrcs/expharness.hpp"
#include "lrcs/io.hpp"
#include "lrcs/netanomaly.hpp"
#include "lrcs/solvers.hpp"

namespace {

using nlohmann::json;

// --seed wins over the LRCS_SEED environment variable.
std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_flag) {
  if (seed_opt->count() > 0) return seed_flag;
  if (const char* env = std::getenv("LRCS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("LRCS_SEED", "not an unsigned integer");
    }
  }
  return seed_flag;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw lrcs::io_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
  if (!out) throw lrcs::io_error(path + ": write failed");
}

json report_to_json(const lrcs::SolverReport& rep) {
  return json{{"iterations", rep.iterations},
              {"objective_trace", rep.objective_trace},
              {"residual_trace", rep.residual_trace},
              {"stop_reason", lrcs::to_string(rep.stop_reason)},
              {"wall_time", rep.wall_time_seconds},
              {"lambda", rep.lambda_used}};
}

json condition_to_json(const lrcs::ConditionReport& c) {
  return json{{"omega_max", c.omega_max},
              {"alpha_max", c.alpha_max},
              {"beta_max", std::isfinite(c.beta_max) ? json(c.beta_max) : json("inf")},
              {"cond_I", c.cond_i},
              {"cond_II", c.cond_ii},
              {"lambda_min", std::isfinite(c.lambda_min) ? json(c.lambda_min) : json("inf")},
              {"lambda_max", std::isfinite(c.lambda_max) ? json(c.lambda_max) : json("inf")},
              {"inputs",
               {{"mu", c.mu},
                {"delta_k", c.delta_k},
                {"theta_11", c.theta_11},
                {"delta_1", c.delta_1},
                {"gamma_v", c.gamma_v},
                {"gamma_r_u", c.gamma_r_u},
                {"xi_r", c.xi_r},
                {"c", c.c},
                {"s", c.s},
                {"k", c.k},
                {"r_rank", c.r_rank}}}};
}

struct GenArgs {
  std::string kind;
  int rows = 0, cols = 0, rank = 0;
  int L = 0, F = 0, T = 0;
  double pi = -1.0;
  long s = -1;
  std::string amplitude = "signs";
  double sd = 1.0;
  std::string mode = "bernoulli_svd";
  int block_rows = 0, block_cols = 0;
  std::string transform = "dct";
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string out_prefix;
  std::string singular_values;
};

lrcs::CompressionSpec make_compression_spec(const GenArgs& a) {
  using Spec = lrcs::CompressionSpec;
  if (a.mode == "identity") return Spec::identity();
  if (a.mode == "bernoulli_svd") return Spec::bernoulli_svd();
  if (a.mode == "block_bounded") {
    const auto t = a.transform == "hadamard" ? Spec::Transform::Hadamard : Spec::Transform::Dct;
    return Spec::block_bounded(a.block_rows, a.block_cols, t);
  }
  throw CLI::ValidationError("--mode", "unknown compression mode '" + a.mode + "'");
}

lrcs::SparsityModel make_sparsity(const GenArgs& a) {
  if ((a.pi >= 0.0) == (a.s >= 0))
    throw CLI::ValidationError("--pi/--s", "exactly one of --pi and --s is required");
  return a.pi >= 0.0 ? lrcs::SparsityModel::bernoulli(a.pi) : lrcs::SparsityModel::uniform(a.s);
}

int run_gen(const GenArgs& a) {
  if (a.kind == "bilinear") {
    lrcs::write_csv(a.out, lrcs::gen_bilinear_lowrank(a.rows, a.cols, a.rank, a.seed));
  } else if (a.kind == "orthogonal") {
    std::vector<double> sv;
    if (a.singular_values.empty()) {
      sv.assign(static_cast<std::size_t>(a.rank), 1.0);
    } else {
      std::istringstream ss(a.singular_values);
      std::string piece;
      while (std::getline(ss, piece, ',')) sv.push_back(std::stod(piece));
    }
    lrcs::write_csv(a.out,
                    lrcs::gen_random_orthogonal_lowrank(a.rows, a.cols, a.rank, sv, a.seed).x);
  } else if (a.kind == "sparse") {
    const auto amp = a.amplitude == "gaussian" ? lrcs::AmplitudeModel::gaussian(a.sd)
                                               : lrcs::AmplitudeModel::signs(a.sd);
    lrcs::write_csv(a.out,
                    lrcs::gen_sparse(a.rows, a.cols, make_sparsity(a), amp, a.seed).first);
  } else if (a.kind == "compression") {
    lrcs::write_csv(a.out, lrcs::gen_compression(a.rows, a.cols, make_compression_spec(a), a.seed));
  } else if (a.kind == "instance") {
    const lrcs::Matrix x0 = lrcs::gen_bilinear_lowrank(a.L, a.T, a.rank, a.seed);
    const auto [a0, support] = lrcs::gen_sparse(a.F, a.T, make_sparsity(a),
                                                lrcs::AmplitudeModel::signs(), a.seed + 1);
    const lrcs::Matrix r = lrcs::gen_compression(a.L, a.F, make_compression_spec(a), a.seed + 2);
    const lrcs::GroundTruth g = lrcs::synthesize_observation(x0, a0, r, a.noise, a.seed + 3);
    lrcs::write_csv(a.out_prefix + "y.csv", g.y);
    lrcs::write_csv(a.out_prefix + "x0.csv", g.x0);
    lrcs::write_csv(a.out_prefix + "a0.csv", g.a0);
    lrcs::write_csv(a.out_prefix + "r.csv", g.r);
  } else {
    throw CLI::ValidationError("--kind", "unknown kind '" + a.kind + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank plus compressed-sparse matrix recovery toolkit"};
  app.require_subcommand(1);

  // ---- gen ----
  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate ensemble matrices");
  cmd_gen->add_option("--kind", gen.kind,
                      "bilinear|orthogonal|sparse|compression|instance")->required();
  cmd_gen->add_option("--rows", gen.rows, "matrix rows");
  cmd_gen->add_option("--cols", gen.cols, "matrix cols");
  cmd_gen->add_option("--rank", gen.rank, "target rank");
  cmd_gen->add_option("--L", gen.L, "instance: observation rows");
  cmd_gen->add_option("--F", gen.F, "instance: sparse rows");
  cmd_gen->add_option("--T", gen.T, "instance: time columns");
  cmd_gen->add_option("--pi", gen.pi, "Bernoulli support probability");
  cmd_gen->add_option("--s", gen.s, "exact support size");
  cmd_gen->add_option("--amplitude", gen.amplitude, "signs|gaussian");
  cmd_gen->add_option("--sd", gen.sd, "amplitude scale");
  cmd_gen->add_option("--mode", gen.mode, "identity|bernoulli_svd|block_bounded");
  cmd_gen->add_option("--block-rows", gen.block_rows, "block mode: rows kept per block (ell)");
  cmd_gen->add_option("--block-cols", gen.block_cols, "block mode: block width (f)");
  cmd_gen->add_option("--transform", gen.transform, "dct|hadamard");
  cmd_gen->add_option("--noise", gen.noise, "observation noise std");
  auto* gen_seed = cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--out", gen.out, "output CSV path");
  cmd_gen->add_option("--out-prefix", gen.out_prefix, "instance: output path prefix");

  // ---- decompose ----
  struct {
    std::string y, r, solver = "apg", out_x, out_a, report;
    double lambda = -1.0, tol = 1e-8, nu0 = -1.0, nu_bar = -1.0, upsilon = 0.9, c = 1.0;
    long max_iter = 10000;
  } dec;
  auto* cmd_dec = app.add_subcommand("decompose", "Solve the convex recovery program");
  cmd_dec->add_option("--y", dec.y, "observation CSV")->required();
  cmd_dec->add_option("--r", dec.r, "compression matrix CSV")->required();
  cmd_dec->add_option("--solver", dec.solver, "apg|admm|cs|lspcp");
  cmd_dec->add_option("--lambda", dec.lambda, "sparsity weight (default 1/sqrt(max(F,T)))");
  cmd_dec->add_option("--tol", dec.tol, "stopping tolerance");
  cmd_dec->add_option("--max-iter", dec.max_iter, "iteration cap");
  cmd_dec->add_option("--nu0", dec.nu0, "APG initial penalty");
  cmd_dec->add_option("--nu-bar", dec.nu_bar, "APG target penalty");
  cmd_dec->add_option("--upsilon", dec.upsilon, "APG continuation factor");
  cmd_dec->add_option("--penalty-c", dec.c, "AD-MoM penalty coefficient");
  cmd_dec->add_option("--out-x", dec.out_x, "recovered X CSV");
  cmd_dec->add_option("--out-a", dec.out_a, "recovered A CSV");
  cmd_dec->add_option("--report", dec.report, "solver report JSON");

  // ---- diagnose ----
  struct {
    std::string x0, a0, r, out;
    int k = 0;
    double c = 0.0;
  } diag;
  auto* cmd_diag = app.add_subcommand("diagnose", "Incoherence, RICs and recovery conditions");
  cmd_diag->add_option("--x0", diag.x0, "low-rank component CSV")->required();
  cmd_diag->add_option("--a0", diag.a0, "sparse component CSV")->required();
  cmd_diag->add_option("--r", diag.r, "compression matrix CSV")->required();
  cmd_diag->add_option("--k", diag.k, "sparsity degree (default: from support)");
  cmd_diag->add_option("--c", diag.c, "RIC normalization (default: spectrum-centering value)");
  cmd_diag->add_option("--out", diag.out, "report JSON")->required();

  // ---- certify ----
  struct {
    std::string x0, a0, r, out, out_gamma;
    double lambda = 0.0, tol_eq = lrcs::kCertificateTol;
    bool auto_lambda = false;
  } cert;
  auto* cmd_cert = app.add_subcommand("certify", "Build and verify the dual certificate");
  cmd_cert->add_option("--x0", cert.x0, "low-rank component CSV")->required();
  cmd_cert->add_option("--a0", cert.a0, "sparse component CSV")->required();
  cmd_cert->add_option("--r", cert.r, "compression matrix CSV")->required();
  auto* lam_opt = cmd_cert->add_option("--lambda", cert.lambda, "certificate weight");
  cmd_cert->add_flag("--auto-lambda", cert.auto_lambda,
                     "use the midpoint of the sufficient-condition interval");
  cmd_cert->add_option("--tol-eq", cert.tol_eq, "equality residual tolerance");
  cmd_cert->add_option("--out", cert.out, "report JSON")->required();
  cmd_cert->add_option("--out-gamma", cert.out_gamma, "certificate matrix CSV");

  // ---- phase-grid ----
  struct {
    std::string config, out;
    int jobs = 1;
  } grid;
  auto* cmd_grid = app.add_subcommand("phase-grid", "Phase-transition experiment grid");
  cmd_grid->add_option("--config", grid.config, "GridConfig JSON")->required();
  cmd_grid->add_option("--out", grid.out, "grid CSV output")->required();
  cmd_grid->add_option("--jobs", grid.jobs, "parallel cells");

  // ---- net-sim ----
  struct {
    int nodes = 20, rank = 10, time = 200;
    double range = 0.35, pi = 0.001, noise = 0.1, amp = 1.0;
    std::uint64_t seed = 0;
    std::string out_prefix;
  } net;
  auto* cmd_net = app.add_subcommand("net-sim", "Synthetic network anomaly instance");
  cmd_net->add_option("--nodes", net.nodes, "node count");
  cmd_net->add_option("--range", net.range, "communication range");
  cmd_net->add_option("--rank", net.rank, "clean-traffic rank");
  cmd_net->add_option("--pi", net.pi, "anomaly probability");
  cmd_net->add_option("--noise", net.noise, "measurement noise std");
  cmd_net->add_option("--amp", net.amp, "anomaly amplitude");
  cmd_net->add_option("--time", net.time, "time slots");
  auto* net_seed = cmd_net->add_option("--seed", net.seed, "RNG seed");
  cmd_net->add_option("--out-prefix", net.out_prefix, "output path prefix")->required();

  // ---- roc ----
  struct {
    std::string scores, truth, out;
  } roc_args;
  auto* cmd_roc = app.add_subcommand("roc", "ROC curve from scores and truth");
  cmd_roc->add_option("--scores", roc_args.scores, "score matrix CSV")->required();
  cmd_roc->add_option("--truth", roc_args.truth, "truth matrix CSV (nonzero = anomaly)")
      ->required();
  cmd_roc->add_option("--out", roc_args.out, "curve CSV output")->required();

  try {
    app.parse(argc, argv);

    if (*cmd_gen) {
      gen.seed = resolve_seed(gen_seed, gen.seed);
      return run_gen(gen);
    }

    if (*cmd_dec) {
      const lrcs::Matrix y = lrcs::read_csv(dec.y);
      const lrcs::Matrix r = lrcs::read_csv(dec.r);
      lrcs::SolverConfig cfg;
      cfg.lambda = dec.lambda;
      cfg.tol = dec.tol;
      cfg.max_iter = dec.max_iter;
      cfg.nu0 = dec.nu0;
      cfg.nu_bar = dec.nu_bar;
      cfg.upsilon = dec.upsilon;
      cfg.penalty_c = dec.c;
      lrcs::Decomposition d;
      lrcs::SolverReport rep;
      if (dec.solver == "apg") {
        std::tie(d, rep) = lrcs::apg_solve(y, r, cfg);
      } else if (dec.solver == "admm") {
        std::tie(d, rep) = lrcs::admm_solve(y, r, cfg);
      } else if (dec.solver == "lspcp") {
        std::tie(d, rep) = lrcs::ls_pcp_baseline(y, r, cfg);
      } else if (dec.solver == "cs") {
        auto [a_hat, cs_rep] = lrcs::cs_solve(y, r, cfg);
        d.a_hat = std::move(a_hat);
        d.x_hat = lrcs::Matrix::Zero(y.rows(), y.cols());
        rep = std::move(cs_rep);
      } else {
        throw CLI::ValidationError("--solver", "unknown solver '" + dec.solver + "'");
      }
      if (!dec.out_x.empty()) lrcs::write_csv(dec.out_x, d.x_hat);
      if (!dec.out_a.empty()) lrcs::write_csv(dec.out_a, d.a_hat);
      if (!dec.report.empty()) write_json(dec.report, report_to_json(rep));
      return 0;
    }

    if (*cmd_diag || *cmd_cert) {
      const bool diagnose = static_cast<bool>(*cmd_diag);
      const std::string x0p = diagnose ? diag.x0 : cert.x0;
      const std::string a0p = diagnose ? diag.a0 : cert.a0;
      const std::string rp = diagnose ? diag.r : cert.r;
      const lrcs::Matrix x0 = lrcs::read_csv(x0p);
      const lrcs::Matrix a0 = lrcs::read_csv(a0p);
      const lrcs::Matrix r = lrcs::read_csv(rp);
      const lrcs::Subspaces spaces = lrcs::subspaces_of(x0);
      const lrcs::SupportSet support = lrcs::SupportSet::from_pattern(a0);
      const int k = std::max(support.max_row_count(), support.max_col_count());
      const lrcs::IncoherenceReport inc = lrcs::incoherence_params(spaces, support, r);

      if (diagnose) {
        const int k_used = diag.k > 0 ? diag.k : std::max(1, k);
        const double c =
            diag.c > 0.0 ? diag.c : lrcs::ric_normalization(r, std::min(k_used, 1));
        const auto dk = lrcs::ric_delta(r, k_used, c);
        const auto d1 = lrcs::ric_delta(r, 1, c);
        const auto th = lrcs::ric_theta(r, 1, 1, c);
        const auto cond = lrcs::check_theorem1(inc, dk, th, d1, spaces.rank(), support.size(),
                                               k_used, c);
        write_json(diag.out,
                   json{{"incoherence",
                         {{"mu", inc.mu},
                          {"gamma_u", inc.gamma_u},
                          {"gamma_v", inc.gamma_v},
                          {"gamma_r_u", inc.gamma_r_u},
                          {"xi_r", inc.xi_r},
                          {"eta_r", inc.eta_r}}},
                        {"rics",
                         {{"delta_k", dk.value},
                          {"delta_1", d1.value},
                          {"theta_11", th.value},
                          {"k", k_used},
                          {"c", c},
                          {"subsets_examined", dk.subsets_examined},
                          {"exact", dk.exact}}},
                        {"theorem1", condition_to_json(cond)},
                        {"cs_condition", lrcs::check_cs(dk, th, k_used)}});
        return 0;
      }

      double lambda = cert.lambda;
      if (cert.auto_lambda || lam_opt->count() == 0) {
        const double c = lrcs::ric_normalization(r, 1);
        const auto dk = lrcs::ric_delta(r, std::max(1, k), c);
        const auto d1 = lrcs::ric_delta(r, 1, c);
        const auto th = lrcs::ric_theta(r, 1, 1, c);
        const auto cond = lrcs::check_theorem1(inc, dk, th, d1, spaces.rank(), support.size(),
                                               std::max(1, k), c);
        if (!(cond.lambda_min < cond.lambda_max) || !std::isfinite(cond.lambda_min))
          throw lrcs::numeric_error(
              "certify: the sufficient-condition lambda interval is empty; pass --lambda");
        lambda = (cond.lambda_min + cond.lambda_max) / 2.0;
      }
      const auto rep = lrcs::build_certificate(spaces, support, a0, r, lambda, cert.tol_eq);
      write_json(cert.out, json{{"lambda", rep.lambda},
                                {"c1_residual", rep.c1_residual},
                                {"c2_residual", rep.c2_residual},
                                {"c3_value", rep.c3_value},
                                {"c4_value", rep.c4_value},
                                {"valid", rep.valid}});
      if (!cert.out_gamma.empty()) lrcs::write_csv(cert.out_gamma, rep.gamma_hat);
      return 0;
    }

    if (*cmd_grid) {
      const lrcs::GridConfig cfg = lrcs::load_grid_config(grid.config);
      const lrcs::GridResult result = lrcs::phase_grid(cfg, grid.jobs);
      lrcs::write_results(result, grid.out, lrcs::ResultFormat::Csv);
      return 0;
    }

    if (*cmd_net) {
      net.seed = resolve_seed(net_seed, net.seed);
      const lrcs::NetworkGraph g =
          lrcs::gen_geometric_graph(net.nodes, net.range, net.seed, /*require_connected=*/true);
      const lrcs::RoutingMatrix routing = lrcs::build_routing(g);
      const lrcs::TrafficInstance inst = lrcs::synthesize_traffic(
          routing, net.rank, net.pi, net.amp, net.noise, net.time, net.seed);
      lrcs::write_csv(net.out_prefix + "y.csv", inst.y);
      lrcs::write_csv(net.out_prefix + "r.csv", routing.m);
      lrcs::write_csv(net.out_prefix + "truth.csv", inst.truth.amplitudes);
      return 0;
    }

    if (*cmd_roc) {
      const lrcs::Matrix scores = lrcs::read_csv(roc_args.scores);
      const lrcs::Matrix truth = lrcs::read_csv(roc_args.truth);
      const lrcs::RocCurve curve = lrcs::roc(scores, truth);
      std::string text = "p_false,p_detect\n";
      char buf[96];
      for (const auto& [pf, pd] : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", pf, pd);
        text += buf;
      }
      std::snprintf(buf, sizeof(buf), "# auc = %.17g\n", curve.auc);
      text += buf;
      std::ofstream out(roc_args.out, std::ios::binary | std::ios::trunc);
      if (!out) throw lrcs::io_error(roc_args.out + ": cannot open for writing");
      out << text;
      if (!out) throw lrcs::io_error(roc_args.out + ": write failed");
      return 0;
    }

    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 1;
  } catch (const lrcs::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const lrcs::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
