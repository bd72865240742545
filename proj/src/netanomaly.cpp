#include "lrcs/netanomaly.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "lrcs/ensembles.hpp"
#include "lrcs/io.hpp"
#include "lrcs/rng.hpp"

namespace lrcs {

namespace {

std::vector<std::vector<int>> adjacency(const NetworkGraph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n_nodes));
  for (const auto& [u, v] : g.links) adj[static_cast<std::size_t>(u)].push_back(v);
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

}  // namespace

bool NetworkGraph::connected() const {
  if (n_nodes <= 0) return false;
  const auto adj = adjacency(*this);
  std::vector<char> seen(static_cast<std::size_t>(n_nodes), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        queue.push_back(v);
      }
  }
  return reached == n_nodes;
}

NetworkGraph gen_geometric_graph(int n, double range, std::uint64_t seed,
                                 bool require_connected) {
  if (n < 2) throw std::invalid_argument("gen_geometric_graph: need n >= 2");
  if (!(range > 0.0) || range > std::sqrt(2.0) + 1e-12)
    throw std::invalid_argument("gen_geometric_graph: range must be in (0, sqrt(2)]");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(attempt)));
    NetworkGraph g;
    g.n_nodes = n;
    g.redraw_attempts = attempt;
    g.positions.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform();
      const double y = rng.uniform();
      g.positions.emplace_back(x, y);
    }
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        const double dx = g.positions[static_cast<std::size_t>(u)].first -
                          g.positions[static_cast<std::size_t>(v)].first;
        const double dy = g.positions[static_cast<std::size_t>(u)].second -
                          g.positions[static_cast<std::size_t>(v)].second;
        if (std::sqrt(dx * dx + dy * dy) < range) {
          g.links.emplace_back(u, v);
          g.links.emplace_back(v, u);
        }
      }
    std::sort(g.links.begin(), g.links.end());
    if (!require_connected || g.connected()) return g;
  }
  throw numeric_error("gen_geometric_graph: no connected draw within 1000 attempts");
}

RoutingMatrix build_routing(const NetworkGraph& g) {
  if (!g.connected()) throw std::invalid_argument("build_routing: graph is not connected");
  const int n = g.n_nodes;
  const auto adj = adjacency(g);

  std::map<std::pair<int, int>, int> link_of;
  RoutingMatrix out;
  out.link_index = g.links;
  for (std::size_t l = 0; l < g.links.size(); ++l)
    link_of[g.links[l]] = static_cast<int>(l);

  // Hop distances toward every destination; used to walk lexicographically
  // smallest shortest paths from each origin.
  std::vector<std::vector<int>> dist_to(static_cast<std::size_t>(n),
                                        std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int d = 0; d < n; ++d) {
    auto& dist = dist_to[static_cast<std::size_t>(d)];
    std::deque<int> queue{d};
    dist[static_cast<std::size_t>(d)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
    }
  }

  const int F = n * (n - 1);
  out.m = Matrix::Zero(g.link_count(), F);
  out.flow_index.reserve(static_cast<std::size_t>(F));
  int flow = 0;
  for (int o = 0; o < n; ++o)
    for (int d = 0; d < n; ++d) {
      if (o == d) continue;
      out.flow_index.emplace_back(o, d);
      const auto& dist = dist_to[static_cast<std::size_t>(d)];
      int cur = o;
      while (cur != d) {
        int next = -1;
        for (int v : adj[static_cast<std::size_t>(cur)])
          if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(cur)] - 1) {
            next = v;  // adjacency is sorted, first hit is the smallest
            break;
          }
        out.m(link_of.at({cur, next}), flow) = 1.0;
        cur = next;
      }
      ++flow;
    }
  return out;
}

TrafficInstance synthesize_traffic(const RoutingMatrix& routing, int r_rank, double pi,
                                   double amp, double noise_sd, int T, std::uint64_t seed) {
  const int F = static_cast<int>(routing.m.cols());
  const int L = static_cast<int>(routing.m.rows());
  if (T < 1) throw std::invalid_argument("synthesize_traffic: T must be >= 1");
  if (amp < 0.0) throw std::invalid_argument("synthesize_traffic: amp must be >= 0");
  TrafficInstance inst;
  inst.z = gen_bilinear_lowrank(F, T, r_rank, derive_seed(seed, 10));
  if (amp > 0.0) {
    auto [a, support] = gen_sparse(F, T, SparsityModel::bernoulli(pi),
                                   AmplitudeModel::signs(amp), derive_seed(seed, 11));
    inst.truth.amplitudes = std::move(a);
  } else {
    // zero amplitude leaves no anomalies to flag
    inst.truth.amplitudes = Matrix::Zero(F, T);
  }
  inst.y = routing.m * (inst.z + inst.truth.amplitudes);
  if (noise_sd > 0.0) {
    Rng rng(derive_seed(seed, 12));
    for (int i = 0; i < L; ++i)
      for (int t = 0; t < T; ++t) inst.y(i, t) += noise_sd * rng.gaussian();
  }
  return inst;
}

Matrix detect(const Matrix& y, const Matrix& routing, const SolverConfig& cfg) {
  if (routing.rows() != y.rows())
    throw std::invalid_argument("detect: routing rows must match y rows");
  const SvdFactors f = svd(routing);
  const Eigen::Index L = routing.rows();
  if (f.sigma.size() < L || !(f.sigma[L - 1] > 1e-10 * f.sigma[0]))
    throw numeric_error(
        "detect: routing matrix is rank deficient; the row-orthonormalizing transform "
        "Sigma^{-1} U' does not exist");
  const Matrix y_t = f.sigma.head(L).cwiseInverse().asDiagonal() * (f.u.transpose() * y);
  const Matrix r_t = f.v.leftCols(L).transpose();
  const auto [dec, rep] = apg_solve(y_t, r_t, cfg);
  return dec.a_hat.cwiseAbs();
}

Matrix detect(const Matrix& y, const RoutingMatrix& routing, const SolverConfig& cfg) {
  return detect(y, routing.m, cfg);
}

Matrix pca_baseline(const Matrix& y, const Matrix& routing, int rank_hint) {
  if (routing.rows() != y.rows())
    throw std::invalid_argument("pca_baseline: routing rows must match y rows");
  const int pmax = static_cast<int>(std::min(y.rows(), y.cols()));
  if (rank_hint < 0 || rank_hint > pmax)
    throw std::invalid_argument("pca_baseline: rank_hint out of [0, min(L,T)]");
  Matrix residual = y;
  if (rank_hint > 0) {
    const SvdFactors f = svd(y);
    const Matrix uk = f.u.leftCols(rank_hint);
    residual -= uk * (uk.transpose() * y);
  }
  const SvdFactors fr = svd(routing);
  const int p = fr.numerical_rank();
  const Matrix pinv_resid = fr.v.leftCols(p) *
                            fr.sigma.head(p).cwiseInverse().asDiagonal() *
                            (fr.u.leftCols(p).transpose() * residual);
  return pinv_resid.cwiseAbs();
}

RocCurve roc(const Matrix& scores, const Matrix& truth_flags) {
  if (scores.rows() != truth_flags.rows() || scores.cols() != truth_flags.cols())
    throw std::invalid_argument("roc: scores and truth shapes differ");
  long positives = 0, negatives = 0;
  std::vector<std::pair<double, bool>> cells;
  cells.reserve(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i)
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      const bool is_true = truth_flags(i, j) != 0.0;
      (is_true ? positives : negatives) += 1;
      cells.emplace_back(scores(i, j), is_true);
    }
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument("roc: degenerate truth (all anomalous or none)");

  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < cells.size()) {
    const double threshold = cells[i].first;
    while (i < cells.size() && cells[i].first == threshold) {
      (cells[i].second ? tp : fp) += 1;
      ++i;
    }
    curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(negatives),
                              static_cast<double>(tp) / static_cast<double>(positives));
  }
  double auc = 0.0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) {
    const auto& [x0, y0] = curve.points[p - 1];
    const auto& [x1, y1] = curve.points[p];
    auc += (x1 - x0) * (y0 + y1) / 2.0;
  }
  curve.auc = auc;
  return curve;
}

Matrix load_flow_matrix(const std::string& path) { return read_csv(path); }

}  // namespace lrcs
