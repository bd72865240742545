#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lrcs/matcore.hpp"
#include "lrcs/solvers.hpp"

namespace lrcs {

// Bidirectional network on the unit square; links stored as ordered pairs,
// both directions present.
struct NetworkGraph {
  int n_nodes = 0;
  std::vector<std::pair<double, double>> positions;
  std::vector<std::pair<int, int>> links;  // directed, sorted
  int redraw_attempts = 0;

  int link_count() const { return static_cast<int>(links.size()); }
  bool connected() const;
};

// Random geometric graph: n uniform points, links between pairs closer than
// range. With require_connected the draw is repeated (derived seeds) until
// the graph is connected.
NetworkGraph gen_geometric_graph(int n, double range, std::uint64_t seed, bool require_connected);

// 0/1 routing matrix over directed links x OD flows, one minimum-hop path per
// flow; BFS ties broken by the lexicographically smallest node sequence.
struct RoutingMatrix {
  Matrix m;                                       // L x F
  std::vector<std::pair<int, int>> flow_index;    // flow -> (origin, destination)
  std::vector<std::pair<int, int>> link_index;    // link -> (u, v)
};

RoutingMatrix build_routing(const NetworkGraph& g);

// Anomaly ground truth: flags are exactly the nonzero amplitudes.
struct AnomalyTruth {
  Matrix amplitudes;  // F x T

  Matrix flags() const {
    return amplitudes.unaryExpr([](double v) { return v != 0.0 ? 1.0 : 0.0; });
  }
};

struct TrafficInstance {
  Matrix y;  // L x T link loads
  AnomalyTruth truth;
  Matrix z;  // F x T clean flows
};

// Y = R (Z + A) + E: Z bilinear rank-r_rank flows, A Bernoulli(pi) signs
// scaled by amp, E Gaussian(noise_sd).
TrafficInstance synthesize_traffic(const RoutingMatrix& routing, int r_rank, double pi,
                                   double amp, double noise_sd, int T, std::uint64_t seed);

// Anomaly scores |a_hat| from the convex decomposition, after orthonormalizing
// the routing matrix rows (y <- Sigma^{-1} U' y, R <- V').
Matrix detect(const Matrix& y, const Matrix& routing, const SolverConfig& cfg);
Matrix detect(const Matrix& y, const RoutingMatrix& routing, const SolverConfig& cfg);

// PCA residual baseline: project link loads onto the orthogonal complement of
// the top-rank_hint principal subspace of Y, then attribute residual
// magnitudes to flows through the routing pseudo-inverse.
Matrix pca_baseline(const Matrix& y, const Matrix& routing, int rank_hint);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (p_false, p_detect)
  double auc = 0.0;
};

// Threshold sweep over all distinct score values; errors when the truth grid
// is all-true or all-false.
RocCurve roc(const Matrix& scores, const Matrix& truth_flags);

// CSV loader for link/flow matrices shaped like the Internet2 exports.
Matrix load_flow_matrix(const std::string& path);

}  // namespace lrcs
