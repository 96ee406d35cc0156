#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latmds/error.hpp"
#include "latmds/geometry.hpp"
#include "latmds/random.hpp"

namespace latmds {

/// Undirected graph on [n] with a squared dissimilarity per edge. Edges are
/// canonicalized to i < j and kept sorted, so iteration order is stable.
class DissimilarityGraph {
public:
  DissimilarityGraph(int n, std::vector<std::pair<int, int>> edges,
                     std::vector<double> d2)
      : n_(n), edges_(std::move(edges)), d2_(std::move(d2)) {
    detail::require(n_ >= 1, errc::invalid_input, "graph needs n >= 1");
    detail::require(edges_.size() == d2_.size(), errc::invalid_input,
                    "edge/dissimilarity length mismatch");
    for (auto& [i, j] : edges_) {
      detail::require(i >= 0 && i < n_ && j >= 0 && j < n_ && i != j,
                      errc::invalid_input, "edge endpoint out of range");
      if (i > j) std::swap(i, j);
    }
    for (double v : d2_)
      detail::require(std::isfinite(v) && v >= 0.0, errc::invalid_input,
                      "squared dissimilarities must be finite and >= 0");

    std::vector<int> perm(edges_.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return edges_[a] < edges_[b]; });
    std::vector<std::pair<int, int>> se(edges_.size());
    std::vector<double> sd(d2_.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      se[k] = edges_[perm[k]];
      sd[k] = d2_[perm[k]];
    }
    edges_ = std::move(se);
    d2_ = std::move(sd);
    detail::require(std::adjacent_find(edges_.begin(), edges_.end()) ==
                        edges_.end(),
                    errc::invalid_input, "duplicate edge");

    adj_.assign(n_, {});
    index_.reserve(edges_.size() * 2);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto [i, j] = edges_[k];
      adj_[i].push_back(j);
      adj_[j].push_back(i);
      index_.emplace(key(i, j), k);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  int size() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<double>& squared() const { return d2_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }

  bool has_edge(int i, int j) const {
    return index_.find(key(i, j)) != index_.end();
  }

  double d2(int i, int j) const {
    const auto it = index_.find(key(i, j));
    detail::require(it != index_.end(), errc::invalid_input,
                    "queried a non-edge");
    return d2_[it->second];
  }

  /// Same topology with replaced dissimilarities (parallel to edges()).
  DissimilarityGraph with_squared(std::vector<double> new_d2) const {
    return DissimilarityGraph(n_, edges_, std::move(new_d2));
  }

private:
  std::uint64_t key(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n_) +
           static_cast<std::uint64_t>(j);
  }

  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<double> d2_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Geometric graph: edge (i, j) iff ||x_i - x_j|| <= r (boundary inclusive),
/// with d2 set to the exact squared distance. Built on a uniform grid of cell
/// size r so only the 3^p surrounding cells are scanned per point.
inline DissimilarityGraph geometric_graph(const Configuration& config,
                                          double r) {
  detail::require(r > 0.0, errc::invalid_input, "radius must be positive");
  const int n = config.size();
  const int p = config.dim();
  const Eigen::MatrixXd& pts = config.points();

  std::map<std::vector<int>, std::vector<int>> cells;
  std::vector<std::vector<int>> cell_of(n, std::vector<int>(p));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k)
      cell_of[i][k] = static_cast<int>(std::floor(pts(i, k) / r));
    cells[cell_of[i]].push_back(i);
  }

  const double r2 = r * r;
  std::vector<std::pair<int, int>> edges;
  std::vector<double> d2;
  std::vector<int> probe(p);
  for (int i = 0; i < n; ++i) {
    // Enumerate the 3^p neighboring cells in odometer order.
    std::vector<int> offset(p, -1);
    while (true) {
      for (int k = 0; k < p; ++k) probe[k] = cell_of[i][k] + offset[k];
      const auto it = cells.find(probe);
      if (it != cells.end()) {
        for (int j : it->second) {
          if (j <= i) continue;
          const double dist2 = (pts.row(i) - pts.row(j)).squaredNorm();
          if (dist2 <= r2) {
            edges.emplace_back(i, j);
            d2.push_back(dist2);
          }
        }
      }
      int k = 0;
      while (k < p && offset[k] == 1) offset[k++] = -1;
      if (k == p) break;
      ++offset[k];
    }
  }
  return DissimilarityGraph(n, std::move(edges), std::move(d2));
}

/// The hollow rectangle Omega(h, kappa) of the planar experiments:
/// [-kappa, kappa] x [-1/kappa, 1/kappa] minus the same rectangle scaled
/// by h about the origin.
struct DomainSpec {
  double h = 0.0;
  double kappa = 1.0;
};

inline Configuration sample_domain(const DomainSpec& spec, int n,
                                   std::uint64_t seed) {
  detail::require(spec.h >= 0.0 && spec.h < 1.0, errc::invalid_input,
                  "hollow fraction must satisfy 0 <= h < 1");
  detail::require(spec.kappa > 0.0, errc::invalid_input, "kappa must be > 0");
  detail::require(n >= 1, errc::invalid_input, "need n >= 1 samples");

  const double kx = spec.kappa;
  const double ky = 1.0 / spec.kappa;
  rng::Stream s(seed);
  Eigen::MatrixXd pts(n, 2);
  int got = 0;
  while (got < n) {
    const double x = s.uniform(-kx, kx);
    const double y = s.uniform(-ky, ky);
    if (std::abs(x) <= spec.h * kx && std::abs(y) <= spec.h * ky) continue;
    pts(got, 0) = x;
    pts(got, 1) = y;
    ++got;
  }
  return Configuration(pts);
}

enum class noise_model { none, additive_gaussian, multiplicative_gaussian };

struct NoiseSpec {
  noise_model model = noise_model::none;
  double variance = 0.0;  // sigma^2 of the Gaussian draws
  std::uint64_t seed = 0;
};

/// `eps_sq_sum` sums the realized squared perturbations (after the clamp at
/// zero), i.e. sum (d2_noisy - d2_true)^2; `eps_sq_sum_drawn` sums the drawn
/// perturbations before truncation. The two agree unless a clamp fired.
struct NoiseResult {
  DissimilarityGraph graph;
  double eps_sq_sum = 0.0;
  double eps_sq_sum_drawn = 0.0;
  int truncations = 0;
};

/// Additive model: d2 <- max(d2 + eps, 0), eps ~ N(0, variance).
/// Multiplicative model: d <- max((1 + eta) d, 0) stored squared,
/// eta ~ N(0, variance); the equivalent additive perturbation is
/// eps = ((1 + eta)^2 - 1) d2. Noise is keyed per edge by (seed, i, j), so
/// results do not depend on edge iteration order.
inline NoiseResult apply_noise(const DissimilarityGraph& graph,
                               const NoiseSpec& spec) {
  detail::require(spec.variance >= 0.0, errc::invalid_input,
                  "noise variance must be >= 0");
  if (spec.model == noise_model::none || spec.variance == 0.0)
    return NoiseResult{graph, 0.0, 0.0, 0};

  const double sigma = std::sqrt(spec.variance);
  std::vector<double> noisy(graph.edge_count());
  double realized = 0.0, drawn = 0.0;
  int clamps = 0;
  for (int k = 0; k < graph.edge_count(); ++k) {
    const auto [i, j] = graph.edges()[k];
    const double d2_true = graph.squared()[k];
    const double z = rng::keyed_normal(
        spec.seed, {static_cast<std::uint64_t>(i),
                    static_cast<std::uint64_t>(j)});
    double eps_drawn, d2_new;
    if (spec.model == noise_model::additive_gaussian) {
      eps_drawn = sigma * z;
      d2_new = d2_true + eps_drawn;
      if (d2_new < 0.0) {
        d2_new = 0.0;
        ++clamps;
      }
    } else {
      const double eta = sigma * z;
      const double scale = 1.0 + eta;
      eps_drawn = (scale * scale - 1.0) * d2_true;
      double d_new = scale * std::sqrt(d2_true);
      if (d_new < 0.0) {
        d_new = 0.0;
        ++clamps;
      }
      d2_new = d_new * d_new;
    }
    noisy[k] = d2_new;
    drawn += eps_drawn * eps_drawn;
    const double eps_real = d2_new - d2_true;
    realized += eps_real * eps_real;
  }
  return NoiseResult{graph.with_squared(std::move(noisy)), realized, drawn,
                     clamps};
}

/// A vertex order in which the first q >= p+1 nodes form a clique and every
/// later node has at least p+1 earlier neighbors (its landmark set).
struct LaterativeOrdering {
  std::vector<int> order;       // permutation of [n]
  std::vector<int> seed_clique; // == first seed_clique.size() entries of order
  // landmarks[k]: for positions k >= |seed_clique|, the already-placed
  // neighbors of order[k] (sorted); empty for clique positions.
  std::vector<std::vector<int>> landmarks;
};

inline bool is_laterative_ordering(const DissimilarityGraph& graph,
                                   const LaterativeOrdering& ordering,
                                   int p) {
  const int n = graph.size();
  const auto& order = ordering.order;
  if (static_cast<int>(order.size()) != n) return false;
  if (static_cast<int>(ordering.landmarks.size()) != n) return false;

  std::vector<int> pos(n, -1);
  for (int k = 0; k < n; ++k) {
    const int v = order[k];
    if (v < 0 || v >= n || pos[v] != -1) return false;
    pos[v] = k;
  }

  const int q = static_cast<int>(ordering.seed_clique.size());
  if (q < p + 1 || q > n) return false;
  for (int k = 0; k < q; ++k)
    if (ordering.seed_clique[k] != order[k]) return false;
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      if (!graph.has_edge(order[a], order[b])) return false;

  for (int k = q; k < n; ++k) {
    const auto& lm = ordering.landmarks[k];
    if (static_cast<int>(lm.size()) < p + 1) return false;
    std::vector<int> sorted = lm;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      return false;
    for (int u : lm) {
      if (u < 0 || u >= n) return false;
      if (pos[u] >= k) return false;              // must be already placed
      if (!graph.has_edge(u, order[k])) return false;
    }
  }
  return true;
}

enum class clique_strategy {
  grown,   // grow the greedy clique up to the cap (noise averaging)
  minimal  // stop at exactly p+1 members
};

struct OrderingOptions {
  clique_strategy strategy = clique_strategy::grown;
  int seed_candidates = 20;  // how many top-degree vertices to try as seeds
  int max_clique_size = -1;  // default 3(p+1) when growing
};

namespace detail {

// Greedy clique growth from `seed`: repeatedly add the vertex adjacent to
// every current member, preferring max degree then smaller id.
inline std::vector<int> grow_clique(const DissimilarityGraph& g, int seed,
                                    int cap) {
  std::vector<int> clique{seed};
  std::vector<int> cand(g.neighbors(seed));
  while (static_cast<int>(clique.size()) < cap && !cand.empty()) {
    int best = -1;
    for (int v : cand)
      if (best == -1 || g.degree(v) > g.degree(best) ||
          (g.degree(v) == g.degree(best) && v < best))
        best = v;
    clique.push_back(best);
    std::vector<int> next;
    for (int v : cand)
      if (v != best && g.has_edge(v, best)) next.push_back(v);
    cand = std::move(next);
  }
  return clique;
}

// Frontier walk from a placed clique. Appends the unplaced vertex with the
// most placed neighbors (ties by smaller id) until done or stalled. Returns
// nullopt on a stall.
inline std::optional<LaterativeOrdering> frontier_walk(
    const DissimilarityGraph& g, const std::vector<int>& clique, int p) {
  const int n = g.size();
  std::vector<char> placed(n, 0);
  std::vector<int> placed_nbrs(n, 0);
  LaterativeOrdering out;
  out.order.reserve(n);
  out.seed_clique = clique;
  out.landmarks.assign(n, {});

  auto place = [&](int v) {
    placed[v] = 1;
    out.order.push_back(v);
    for (int u : g.neighbors(v)) ++placed_nbrs[u];
  };
  for (int v : clique) place(v);

  while (static_cast<int>(out.order.size()) < n) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[v] && placed_nbrs[v] >= p + 1 &&
          (best == -1 || placed_nbrs[v] > placed_nbrs[best]))
        best = v;
    if (best == -1) return std::nullopt;
    const int k = static_cast<int>(out.order.size());
    for (int u : g.neighbors(best))
      if (placed[u]) out.landmarks[k].push_back(u);
    place(best);
  }
  return out;
}

inline std::vector<int> by_degree_desc(const DissimilarityGraph& g) {
  std::vector<int> vs(g.size());
  for (int v = 0; v < g.size(); ++v) vs[v] = v;
  std::sort(vs.begin(), vs.end(), [&](int a, int b) {
    return g.degree(a) > g.degree(b) ||
           (g.degree(a) == g.degree(b) && a < b);
  });
  return vs;
}

}  // namespace detail

/// Greedy search for a laterative ordering: try a greedy clique grown from
/// each of the top-`seed_candidates` degree vertices, then a frontier walk.
/// Heuristic; returns nullopt when every tried seed stalls. The validator
/// is_laterative_ordering is exact.
inline std::optional<LaterativeOrdering> find_laterative_ordering(
    const DissimilarityGraph& graph, int p,
    const OrderingOptions& opts = {}) {
  detail::require(p >= 1, errc::invalid_input, "dimension must be >= 1");
  detail::require(graph.size() >= p + 1, errc::invalid_input,
                  "graph smaller than p+1");
  const int cap = opts.strategy == clique_strategy::minimal
                      ? p + 1
                      : (opts.max_clique_size > 0 ? opts.max_clique_size
                                                  : 3 * (p + 1));
  detail::require(cap >= p + 1, errc::invalid_input,
                  "clique cap below p+1");

  const auto seeds = detail::by_degree_desc(graph);
  const int tries =
      std::min<int>(opts.seed_candidates, static_cast<int>(seeds.size()));
  for (int t = 0; t < tries; ++t) {
    const auto clique = detail::grow_clique(graph, seeds[t], cap);
    if (static_cast<int>(clique.size()) < p + 1) continue;
    if (auto ord = detail::frontier_walk(graph, clique, p)) return ord;
  }
  return std::nullopt;
}

/// Frontier walk from a caller-chosen seed clique (used by the 'best'
/// variant). The clique must induce a complete subgraph.
inline std::optional<LaterativeOrdering> ordering_from_seed(
    const DissimilarityGraph& graph, const std::vector<int>& seed_clique,
    int p) {
  detail::require(static_cast<int>(seed_clique.size()) >= p + 1,
                  errc::invalid_input, "seed clique smaller than p+1");
  for (std::size_t a = 0; a < seed_clique.size(); ++a)
    for (std::size_t b = a + 1; b < seed_clique.size(); ++b)
      detail::require(graph.has_edge(seed_clique[a], seed_clique[b]),
                      errc::invalid_input, "seed set is not a clique");
  return detail::frontier_walk(graph, seed_clique, p);
}

}  // namespace latmds
