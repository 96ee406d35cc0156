#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "latmds/embedders.hpp"
#include "latmds/error.hpp"
#include "latmds/geometry.hpp"
#include "latmds/graph.hpp"
#include "latmds/random.hpp"
#include "latmds/stress.hpp"

namespace latmds {

/// How a node's coordinates were produced: by classical scaling of the seed
/// clique, or by classical lateration during the frontier walk.
enum class node_source { seed_scaled, laterated };

struct EmbeddingResult {
  Configuration config;
  LaterativeOrdering ordering;  // the walk actually taken
  // provenance[v] says how node v was embedded; step[v] is its position in
  // ordering.order (clique members occupy the first positions).
  std::vector<node_source> provenance;
  std::vector<int> step;
  double stress = 0.0;     // s-stress of config on the input dissimilarities
  double wall_time = 0.0;  // seconds
};

namespace detail {

struct WalkResult {
  Configuration config;
  LaterativeOrdering ordering;
};

// Frontier walk with placement: starts from the placed clique (rows of
// `clique_coords` aligned with `clique`) and laterates each incoming node
// against all of its already-placed neighbors. A node whose landmark set is
// numerically degenerate is deferred and retried after the next successful
// placement; if every remaining candidate is deferred the walk stalls.
inline WalkResult laterate_walk(const DissimilarityGraph& g, int p,
                                const std::vector<int>& clique,
                                const Eigen::MatrixXd& clique_coords) {
  const int n = g.size();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, p);
  std::vector<char> placed(n, 0);
  std::vector<char> deferred(n, 0);
  std::vector<int> placed_nbrs(n, 0);

  LaterativeOrdering ord;
  ord.order.reserve(n);
  ord.seed_clique = clique;
  ord.landmarks.assign(n, {});

  auto place = [&](int v, const Eigen::RowVectorXd& coord) {
    y.row(v) = coord;
    placed[v] = 1;
    ord.order.push_back(v);
    for (int u : g.neighbors(v)) ++placed_nbrs[u];
  };
  for (std::size_t a = 0; a < clique.size(); ++a)
    place(clique[a], clique_coords.row(static_cast<int>(a)));

  while (static_cast<int>(ord.order.size()) < n) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[v] && !deferred[v] && placed_nbrs[v] >= p + 1 &&
          (best == -1 || placed_nbrs[v] > placed_nbrs[best]))
        best = v;
    if (best == -1) {
      const bool stalled_on_degeneracy =
          std::find(deferred.begin(), deferred.end(), 1) != deferred.end();
      throw error(stalled_on_degeneracy
                      ? errc::degenerate_step
                      : errc::not_laterable,
                  stalled_on_degeneracy
                      ? "frontier stalled: every candidate landmark set is "
                        "numerically degenerate"
                      : "frontier stalled: no unplaced node has p+1 placed "
                        "neighbors",
                  static_cast<long>(ord.order.size()));
    }

    std::vector<int> lms;
    lms.reserve(placed_nbrs[best]);
    for (int u : g.neighbors(best))
      if (placed[u]) lms.push_back(u);
    Eigen::MatrixXd lpts(static_cast<int>(lms.size()), p);
    Eigen::VectorXd ld2(static_cast<int>(lms.size()));
    for (std::size_t a = 0; a < lms.size(); ++a) {
      lpts.row(static_cast<int>(a)) = y.row(lms[a]);
      ld2(static_cast<int>(a)) = g.d2(lms[a], best);
    }
    try {
      const Eigen::VectorXd coord =
          classical_lateration(Configuration(std::move(lpts)), ld2);
      const int k = static_cast<int>(ord.order.size());
      ord.landmarks[k] = std::move(lms);
      place(best, coord.transpose());
      // New landmarks exist now; deferred sets may have become usable.
      std::fill(deferred.begin(), deferred.end(), 0);
    } catch (const error& e) {
      if (e.code() != errc::degenerate_landmarks) throw;
      deferred[best] = 1;
    }
  }
  return WalkResult{Configuration(std::move(y)), std::move(ord)};
}

// Classical scaling of the clique's complete sub-dissimilarity matrix,
// then the placement walk.
inline WalkResult embed_from_clique(const DissimilarityGraph& g, int p,
                                    const std::vector<int>& clique) {
  const int q = static_cast<int>(clique.size());
  Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      sub(a, b) = sub(b, a) = g.d2(clique[a], clique[b]);
  const ScalingOutput scaled = classical_scaling(sub, p);
  return laterate_walk(g, p, clique, scaled.config.points());
}

inline EmbeddingResult finish_result(
    const DissimilarityGraph& g, WalkResult&& walk,
    std::chrono::steady_clock::time_point t0) {
  const int n = g.size();
  const int q = static_cast<int>(walk.ordering.seed_clique.size());
  EmbeddingResult out{std::move(walk.config), std::move(walk.ordering),
                      std::vector<node_source>(n, node_source::laterated),
                      std::vector<int>(n, -1), 0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const int v = out.ordering.order[k];
    out.step[v] = k;
    if (k < q) out.provenance[v] = node_source::seed_scaled;
  }
  out.stress = s_stress(out.config, g);
  out.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return out;
}

// All (p+1)-cliques as sorted id tuples, fed to `visit` in lexicographic
// order (backtracking over increasing ids).
template <typename Visit>
inline void for_each_clique(const DissimilarityGraph& g, int size,
                            Visit&& visit) {
  std::vector<int> clique;
  clique.reserve(size);
  std::vector<std::vector<int>> cand_stack;
  auto extend = [&](auto&& self, const std::vector<int>& cands) -> void {
    if (static_cast<int>(clique.size()) == size) {
      visit(clique);
      return;
    }
    const int need = size - static_cast<int>(clique.size());
    for (std::size_t idx = 0; idx < cands.size(); ++idx) {
      if (static_cast<int>(cands.size() - idx) < need) break;
      const int v = cands[idx];
      std::vector<int> next;
      for (std::size_t b = idx + 1; b < cands.size(); ++b)
        if (g.has_edge(v, cands[b])) next.push_back(cands[b]);
      clique.push_back(v);
      self(self, next);
      clique.pop_back();
    }
  };
  for (int v = 0; v < g.size(); ++v) {
    std::vector<int> cands;
    for (int u : g.neighbors(v))
      if (u > v) cands.push_back(u);
    clique.push_back(v);
    extend(extend, cands);
    clique.pop_back();
  }
}

}  // namespace detail

/// The 'first' variant: greedy seed clique, classical scaling, then the
/// frontier walk; stops at the first full embedding.
inline EmbeddingResult sequential_laterate_first(
    const DissimilarityGraph& graph, int p,
    const OrderingOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto found = find_laterative_ordering(graph, p, opts);
  detail::require(found.has_value(), errc::not_laterable,
                  "no laterative ordering found");
  auto walk = detail::embed_from_clique(graph, p, found->seed_clique);
  return detail::finish_result(graph, std::move(walk), t0);
}

/// The 'best' variant: enumerate candidate seed (p+1)-cliques (all of them
/// when at most `budget`, else a seeded reservoir sample of `budget`), walk
/// each, and keep the full embedding of minimum s-stress. Ties go to the
/// lexicographically smallest seed tuple.
inline EmbeddingResult sequential_laterate_best(const DissimilarityGraph& graph,
                                                int p, int budget = 200,
                                                std::uint64_t seed = 0) {
  detail::require(p >= 1, errc::invalid_input, "dimension must be >= 1");
  detail::require(budget >= 1, errc::invalid_input, "budget must be >= 1");
  detail::require(graph.size() >= p + 1, errc::invalid_input,
                  "graph smaller than p+1");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::vector<int>> chosen;
  chosen.reserve(static_cast<std::size_t>(budget));
  std::uint64_t seen = 0;
  rng::Stream rs(seed, 13);
  detail::for_each_clique(graph, p + 1, [&](const std::vector<int>& clique) {
    ++seen;
    if (static_cast<int>(chosen.size()) < budget)
      chosen.push_back(clique);
    else if (const std::uint64_t r = rs.next_u64() % seen;
             r < static_cast<std::uint64_t>(budget))
      chosen[static_cast<std::size_t>(r)] = clique;
  });
  detail::require(!chosen.empty(), errc::not_laterable,
                  "graph has no (p+1)-clique");
  std::sort(chosen.begin(), chosen.end());

  std::optional<EmbeddingResult> best;
  for (const auto& clique : chosen) {
    try {
      auto walk = detail::embed_from_clique(graph, p, clique);
      EmbeddingResult cand = detail::finish_result(graph, std::move(walk), t0);
      if (!best || cand.stress < best->stress) best = std::move(cand);
    } catch (const error& e) {
      if (e.code() == errc::invalid_input) throw;
      // Degenerate or stalled candidate: try the next seed.
    }
  }
  detail::require(best.has_value(), errc::not_laterable,
                  "no candidate seed clique yields a full embedding");
  best->wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return *std::move(best);
}

/// Proof constants of the accuracy theorem for a concrete instance. `A_n`
/// multiplies the total squared perturbation in the error bound; `sigma4_max`
/// is the admissible threshold on that perturbation for the bound to apply.
struct TheoryBound {
  double alpha = 0.0;      // max over landmark sets of (rho_k / omega_k)^2
  double omega_min = 0.0;  // min over landmark sets of omega_k
  double A_n = 0.0;
  double sigma4_max = 0.0;
  double C1 = 0.0;  // classical scaling constant (caller-supplied)
  double C2 = 0.0;  // classical lateration constant (caller-supplied)
};

/// The closed forms
///   A_n = (1+C2 a)^{n-p-1} / ((p+1) w^2) * max{C1 a, C2/(1+C2 a)}
///   sigma4_max = min{(p+1)^2 (w/C1)^4,
///                    (p+1) w^4 / (C2^2 (1+C2 a)^{n-p-2} max{C1 a, C2/(1+C2 a)})}
/// with a = alpha and w = omega_min. When n = p+1 there are no lateration
/// steps: A_n = C1 a / ((p+1) w^2) and only the first sigma branch applies.
inline TheoryBound theory_bound_from_constants(double alpha, double omega_min,
                                               double C1, double C2, int n,
                                               int p) {
  detail::require(C1 >= 1.0 && C2 >= 1.0, errc::invalid_input,
                  "constants C1, C2 must be >= 1");
  detail::require(p >= 1 && n >= p + 1, errc::invalid_input,
                  "need n >= p+1 and p >= 1");
  detail::require(alpha >= 1.0 && omega_min > 0.0, errc::invalid_input,
                  "need alpha >= 1 and omega_min > 0");

  const double w2 = omega_min * omega_min;
  const double w4 = w2 * w2;
  const double base = 1.0 + C2 * alpha;
  const double lead = std::max(C1 * alpha, C2 / base);

  TheoryBound out;
  out.alpha = alpha;
  out.omega_min = omega_min;
  out.C1 = C1;
  out.C2 = C2;
  const double sigma_scaling = (p + 1.0) * (p + 1.0) * w4 / std::pow(C1, 4);
  if (n == p + 1) {
    out.A_n = C1 * alpha / ((p + 1.0) * w2);
    out.sigma4_max = sigma_scaling;
  } else {
    out.A_n = std::pow(base, n - p - 1) / ((p + 1.0) * w2) * lead;
    const double sigma_lateration =
        (p + 1.0) * w4 / (C2 * C2 * std::pow(base, n - p - 2) * lead);
    out.sigma4_max = std::min(sigma_scaling, sigma_lateration);
  }
  return out;
}

/// Extracts alpha = max_k (rho_k/omega_k)^2 and omega_min = min_k omega_k
/// over the seed clique and every landmark set of `ordering` in the latent
/// configuration, then evaluates the closed forms above.
inline TheoryBound theory_bound(const Configuration& latent,
                                const LaterativeOrdering& ordering,
                                double C1, double C2, int p) {
  detail::require(C1 >= 1.0 && C2 >= 1.0, errc::invalid_input,
                  "constants C1, C2 must be >= 1");
  detail::require(p >= 1, errc::invalid_input, "dimension must be >= 1");
  const int n = latent.size();
  detail::require(static_cast<int>(ordering.order.size()) == n &&
                      static_cast<int>(ordering.landmarks.size()) == n,
                  errc::invalid_input, "ordering/latent size mismatch");
  const int q = static_cast<int>(ordering.seed_clique.size());
  detail::require(q >= p + 1, errc::invalid_input,
                  "seed clique smaller than p+1");

  auto set_stats = [&](const std::vector<int>& ids) {
    Eigen::MatrixXd pts(static_cast<int>(ids.size()), latent.dim());
    for (std::size_t a = 0; a < ids.size(); ++a)
      pts.row(static_cast<int>(a)) = latent.points().row(ids[a]);
    const ShapeStats st = shape_stats(Configuration(std::move(pts)));
    detail::require(st.width > 0.0, errc::degenerate_landmarks,
                    "landmark set has zero width in the latent configuration");
    return st;
  };

  ShapeStats st = set_stats(ordering.seed_clique);
  double alpha = st.aspect();
  double omega_min = st.width;
  for (int k = q; k < n; ++k) {
    const auto& lm = ordering.landmarks[k];
    detail::require(static_cast<int>(lm.size()) >= p + 1, errc::invalid_input,
                    "ordering has a landmark set smaller than p+1");
    st = set_stats(lm);
    alpha = std::max(alpha, st.aspect());
    omega_min = std::min(omega_min, st.width);
  }
  return theory_bound_from_constants(alpha, omega_min, C1, C2, n, p);
}

/// Empirical check of the perturbation bound on one instance.
struct PerturbationDiagnostics {
  double total_error = 0.0;  // min_g sum_i ||y_i - g(x_i)||^2
  double eps_sq_sum = 0.0;   // sum over edges (d_ij^2 - ||x_i - x_j||^2)^2
  double ratio = 0.0;        // total_error / eps_sq_sum; 0 when eps_sq_sum = 0
  // eps_sq_sum = 0 but total_error above the realizable tolerance
  // 1e-16 * n * rho^2 (rho = latent diameter).
  bool exactness_violation = false;
};

inline PerturbationDiagnostics verify_perturbation_bound(
    const Configuration& latent, const DissimilarityGraph& graph_noisy,
    const EmbeddingResult& result) {
  detail::require(latent.size() == graph_noisy.size() &&
                      latent.size() == result.config.size(),
                  errc::invalid_input, "latent/graph/result size mismatch");
  detail::require(latent.dim() == result.config.dim(), errc::invalid_input,
                  "latent/result dimension mismatch");

  PerturbationDiagnostics diag;
  diag.total_error = procrustes_align(latent, result.config).error;
  for (int k = 0; k < graph_noisy.edge_count(); ++k) {
    const auto [i, j] = graph_noisy.edges()[k];
    const double true_d2 =
        (latent.points().row(i) - latent.points().row(j)).squaredNorm();
    const double eps = graph_noisy.squared()[k] - true_d2;
    diag.eps_sq_sum += eps * eps;
  }
  if (diag.eps_sq_sum > 0.0) {
    diag.ratio = diag.total_error / diag.eps_sq_sum;
  } else {
    const double rho = shape_stats(latent).diameter;
    diag.exactness_violation =
        diag.total_error > 1e-16 * latent.size() * rho * rho;
  }
  return diag;
}

}  // namespace latmds
