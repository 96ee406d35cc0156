#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "latmds/error.hpp"
#include "latmds/geometry.hpp"
#include "latmds/graph.hpp"
#include "latmds/random.hpp"

namespace latmds {

/// sum over edges of (||y_i - y_j||^2 - d_ij^2)^2.
inline double s_stress(const Configuration& config,
                       const DissimilarityGraph& graph) {
  detail::require(config.size() == graph.size(), errc::invalid_input,
                  "configuration/graph size mismatch");
  const Eigen::MatrixXd& y = config.points();
  double total = 0.0;
  for (int k = 0; k < graph.edge_count(); ++k) {
    const auto [i, j] = graph.edges()[k];
    const double r = (y.row(i) - y.row(j)).squaredNorm() - graph.squared()[k];
    total += r * r;
  }
  return total;
}

/// Analytic gradient of s_stress: row i is
/// sum_j 4 (||y_i - y_j||^2 - d_ij^2)(y_i - y_j) over neighbors j.
inline Eigen::MatrixXd s_stress_gradient(const Configuration& config,
                                         const DissimilarityGraph& graph) {
  detail::require(config.size() == graph.size(), errc::invalid_input,
                  "configuration/graph size mismatch");
  const Eigen::MatrixXd& y = config.points();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(config.size(), config.dim());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const auto [i, j] = graph.edges()[k];
    const Eigen::RowVectorXd diff = y.row(i) - y.row(j);
    const double r = diff.squaredNorm() - graph.squared()[k];
    g.row(i) += 4.0 * r * diff;
    g.row(j) -= 4.0 * r * diff;
  }
  return g;
}

struct OptimizerConfig {
  int max_iters = 500;
  double step_size = 1e-3;  // initial GD step; backtrack 0.5, growth 1.1
  double rel_tol = 1e-10;   // on relative stress decrease
  std::uint64_t seed = 0;   // used only by random initialization
  bool record_trace = false;

  void validate() const {
    detail::require(max_iters >= 1, errc::invalid_input,
                    "optimizer needs max_iters >= 1");
    detail::require(step_size > 0.0 && rel_tol > 0.0, errc::invalid_input,
                    "optimizer tolerances must be positive");
  }
};

inline OptimizerConfig default_gd_config() { return OptimizerConfig{}; }

inline OptimizerConfig default_smacof_config() {
  OptimizerConfig c;
  c.max_iters = 300;
  return c;
}

struct TraceRow {
  int iter = 0;
  double stress = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

/// `stress` is the final value of the optimizer's own objective (s-stress
/// for GD, raw Kruskal stress for SMACOF); `s_stress` is always the
/// squared-distance residual sum, whatever the optimizer minimized.
struct OptimizeResult {
  Configuration config;
  double stress = 0.0;
  double s_stress = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

/// Gaussian initialization scaled to the graph's dissimilarity scale
/// (root mean squared dissimilarity).
inline Configuration random_init(const DissimilarityGraph& graph, int p,
                                 std::uint64_t seed) {
  double mean_d2 = 0.0;
  for (double v : graph.squared()) mean_d2 += v;
  mean_d2 = graph.edge_count() > 0 ? mean_d2 / graph.edge_count() : 1.0;
  const double scale = std::sqrt(std::max(mean_d2, 1e-300));
  rng::Stream s(seed, 11);
  Eigen::MatrixXd y(graph.size(), p);
  for (int i = 0; i < graph.size(); ++i)
    for (int k = 0; k < p; ++k) y(i, k) = scale * s.normal();
  return Configuration(y);
}

/// Gradient descent with backtracking line search on the s-stress.
/// Accepts only strictly improving iterates, so the returned stress never
/// exceeds the initial one; stops at max_iters, on the relative-decrease
/// tolerance, or when no improving step exists (stationary point).
inline OptimizeResult minimize_gd(const DissimilarityGraph& graph, int p,
                                  const Configuration& init,
                                  const OptimizerConfig& opt =
                                      default_gd_config()) {
  opt.validate();
  detail::require(init.size() == graph.size() && init.dim() == p,
                  errc::invalid_input, "initial configuration shape mismatch");

  Eigen::MatrixXd y = init.points();
  double f = s_stress(Configuration(y), graph);
  detail::require(std::isfinite(f), errc::numerical_failure,
                  "non-finite stress at the initial point");

  OptimizeResult out{Configuration(y), f, f, 0, false, {}};
  double step = opt.step_size;
  for (int it = 1; it <= opt.max_iters; ++it) {
    const Eigen::MatrixXd g = s_stress_gradient(Configuration(y), graph);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      out.converged = true;
      break;
    }

    double f_new = f;
    Eigen::MatrixXd y_new;
    bool improved = false;
    while (step > 1e-18) {
      y_new = y - step * g;
      f_new = s_stress(Configuration(y_new), graph);
      detail::require(std::isfinite(f_new), errc::numerical_failure,
                      "non-finite stress during line search");
      if (f_new < f) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      out.converged = true;
      break;
    }

    y = std::move(y_new);
    out.iterations = it;
    if (opt.record_trace) out.trace.push_back({it, f_new, gnorm, step});
    const double drop = f - f_new;
    f = f_new;
    step *= 1.1;
    if (drop <= opt.rel_tol * std::max(f, 1e-300)) {
      out.converged = true;
      break;
    }
  }
  out.config = Configuration(y);
  out.stress = f;
  out.s_stress = f;
  return out;
}

/// SMACOF majorization on the raw Kruskal stress sum (d_ij - ||y_i-y_j||)^2
/// with uniform weights on the edge set. The Guttman transform solves the
/// graph-Laplacian system with node 0 grounded, then re-centers the iterate
/// on the previous centroid (the transform is translation-blind). Pairs
/// closer than 1e-12 contribute zero. Raw stress is non-increasing; a final
/// s-stress is also reported.
inline OptimizeResult minimize_smacof(const DissimilarityGraph& graph, int p,
                                      const Configuration& init,
                                      const OptimizerConfig& opt =
                                          default_smacof_config()) {
  opt.validate();
  detail::require(init.size() == graph.size() && init.dim() == p,
                  errc::invalid_input, "initial configuration shape mismatch");
  const int n = graph.size();
  detail::require(n >= 2, errc::invalid_input, "need at least two nodes");

  std::vector<double> target(graph.edge_count());
  for (int k = 0; k < graph.edge_count(); ++k)
    target[k] = std::sqrt(graph.squared()[k]);

  auto raw_stress = [&](const Eigen::MatrixXd& y) {
    double s = 0.0;
    for (int k = 0; k < graph.edge_count(); ++k) {
      const auto [i, j] = graph.edges()[k];
      const double dist = (y.row(i) - y.row(j)).norm();
      const double r = target[k] - dist;
      s += r * r;
    }
    return s;
  };

  // Grounded weight Laplacian (node 0 removed); constant across iterations.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(graph.edge_count() * 4);
  {
    std::vector<double> diag(n, 0.0);
    for (const auto& [i, j] : graph.edges()) {
      diag[i] += 1.0;
      diag[j] += 1.0;
      if (i > 0 && j > 0)
        trips.emplace_back(i - 1, j - 1, -1.0),
            trips.emplace_back(j - 1, i - 1, -1.0);
    }
    for (int i = 1; i < n; ++i) trips.emplace_back(i - 1, i - 1, diag[i]);
  }
  Eigen::SparseMatrix<double> v11(n - 1, n - 1);
  v11.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(v11);
  detail::require(solver.info() == Eigen::Success, errc::numerical_failure,
                  "Laplacian factorization failed (graph disconnected?)");

  Eigen::MatrixXd y = init.points();
  double f = raw_stress(y);
  detail::require(std::isfinite(f), errc::numerical_failure,
                  "non-finite stress at the initial point");
  OptimizeResult out{Configuration(y), f, 0.0, 0, false, {}};

  for (int it = 1; it <= opt.max_iters; ++it) {
    // rhs = B(y) y, where B is the Laplacian of weights d_ij/dist_ij
    Eigen::MatrixXd by = Eigen::MatrixXd::Zero(n, p);
    for (int k = 0; k < graph.edge_count(); ++k) {
      const auto [i, j] = graph.edges()[k];
      const Eigen::RowVectorXd diff = y.row(i) - y.row(j);
      const double dist = diff.norm();
      if (dist < 1e-12) continue;
      const double b = target[k] / dist;
      by.row(i) += b * diff;
      by.row(j) -= b * diff;
    }

    const Eigen::RowVectorXd prev_centroid = y.colwise().mean();
    Eigen::MatrixXd y_new(n, p);
    y_new.row(0).setZero();
    y_new.bottomRows(n - 1) = solver.solve(by.bottomRows(n - 1));
    detail::require(solver.info() == Eigen::Success, errc::numerical_failure,
                    "Guttman transform solve failed");
    y_new.rowwise() += prev_centroid - y_new.colwise().mean().eval();

    const double f_new = raw_stress(y_new);
    detail::require(std::isfinite(f_new), errc::numerical_failure,
                    "non-finite stress during majorization");
    if (f_new >= f) {  // stationary (or rounding): keep the previous iterate
      out.converged = true;
      break;
    }
    y = std::move(y_new);
    out.iterations = it;
    if (opt.record_trace) out.trace.push_back({it, f_new, 0.0, 0.0});
    const double drop = f - f_new;
    f = f_new;
    if (drop <= opt.rel_tol * std::max(f, 1e-300)) {
      out.converged = true;
      break;
    }
  }
  out.config = Configuration(y);
  out.stress = f;
  out.s_stress = s_stress(out.config, graph);
  return out;
}

/// The lower-bound construction of the scaling proposition: dissimilarities
/// d_ij^2 = ||eta x_i - eta x_j||^2 on a given topology, whose s-stress is
/// minimized (at exactly zero) by y*_i = eta x_i, with lower-bound constant
/// a = 1/(8 max-degree).
struct ScalingInstance {
  double eta = 1.0;
  DissimilarityGraph graph;
  Configuration latent;
  Configuration analytic_minimizer;
  double a_const = 0.0;
  double eps_sq_sum = 0.0;  // sum over edges of (d_ij^2 - ||x_i-x_j||^2)^2
};

inline ScalingInstance make_scaling_instance(
    const Configuration& latent, const DissimilarityGraph& topology,
    double eta) {
  detail::require(eta > 0.0 && eta <= 1.0, errc::invalid_input,
                  "eta must lie in (0, 1]");
  detail::require(latent.size() == topology.size(), errc::invalid_input,
                  "latent/topology size mismatch");

  const Eigen::MatrixXd ystar = eta * latent.points();
  // Dissimilarities are the exact squared distances of the (rounded)
  // minimizer, so its s-stress is zero to the last bit.
  std::vector<double> d2(topology.edge_count());
  double eps_sq = 0.0;
  for (int k = 0; k < topology.edge_count(); ++k) {
    const auto [i, j] = topology.edges()[k];
    d2[k] = (ystar.row(i) - ystar.row(j)).squaredNorm();
    const double true_d2 =
        (latent.points().row(i) - latent.points().row(j)).squaredNorm();
    const double eps = d2[k] - true_d2;
    eps_sq += eps * eps;
  }

  int max_deg = 0;
  for (int v = 0; v < topology.size(); ++v)
    max_deg = std::max(max_deg, topology.degree(v));
  detail::require(max_deg > 0, errc::invalid_input,
                  "topology has an isolated node set");

  return ScalingInstance{eta,
                         topology.with_squared(std::move(d2)),
                         latent,
                         Configuration(ystar),
                         1.0 / (8.0 * max_deg),
                         eps_sq};
}

}  // namespace latmds
