// Acceptance gate: ten end-to-end checks, one pass/fail line each.
// Run with no argument for all criteria, or with an index (1..10).

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latmds/bench.hpp"
#include "latmds/sequential.hpp"
#include "latmds/stress.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using namespace latmds;
using Clock = std::chrono::steady_clock;

namespace {

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Configuration cube_config(std::uint64_t seed, int n, int p) {
  rng::Stream s(seed);
  Eigen::MatrixXd pts(n, p);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < p; ++k) pts(i, k) = s.uniform(0.0, 1.0);
  return Configuration(pts);
}

struct Instance {
  Configuration latent;
  DissimilarityGraph graph;
};

std::optional<Instance> laterable_rgg(std::uint64_t seed, int n, int p,
                                      double r) {
  for (int salt = 0; salt <= 50; ++salt) {
    Configuration latent = cube_config(seed + 7919ull * salt, n, p);
    DissimilarityGraph g = geometric_graph(latent, r);
    if (find_laterative_ordering(g, p).has_value())
      return Instance{std::move(latent), std::move(g)};
  }
  return std::nullopt;
}

bool connected(const DissimilarityGraph& g) {
  if (g.size() == 0) return true;
  std::vector<char> seen(g.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
  }
  return reached == g.size();
}

// connected noisy instance; salts the seed until the draw is connected
NoiseResult connected_noisy(std::uint64_t seed, int n, double r, double var) {
  for (std::uint64_t salt = 0;; ++salt) {
    const auto latent = testutil::random_config(seed + 1000 * salt, n, 2, 1.0);
    auto g = geometric_graph(latent, r);
    if (!connected(g)) continue;
    return apply_noise(g, {noise_model::additive_gaussian, var,
                           rng::derive(6100, {seed})});
  }
}

bench::ScenarioConfig desk_grid() {
  bench::ScenarioConfig cfg;
  cfg.id = "desk";
  cfg.n = 500;
  cfg.domain = DomainSpec{0.2, 1.0};
  cfg.r = 0.3;
  cfg.sigma2_grid = {1e-5, 1e-4, 1e-3, 1e-2};
  cfg.trials = 20;
  cfg.methods = {bench::method::seq_first};
  cfg.seed = 9000;
  return cfg;
}

std::map<double, double> level_medians(
    const std::vector<bench::ResultRow>& rows, const std::string& method,
    double bench::ResultRow::* field) {
  std::map<double, std::vector<double>> groups;
  for (const auto& row : rows)
    if (row.method == method && row.laterable) groups[row.sigma2].push_back(row.*field);
  std::map<double, double> out;
  for (auto& [sigma2, values] : groups)
    out[sigma2] = bench::median_of(std::move(values));
  return out;
}

// 1. Exact recovery on realizable lateration graphs.
bool criterion_realizable_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t s = rng::derive(6000, {(std::uint64_t)t});
    rng::Stream ps(s, 3);
    const int p = 2 + (t % 5 == 4 ? 1 : 0);
    const int n = 50 + (int)(ps.uniform() * 451.0);
    const double r = p == 2 ? 0.30 : 0.45;
    const auto inst = laterable_rgg(s, n, p, r);
    if (!inst) {
      std::printf("FAIL  1  realizable exactness: no laterable instance for "
                  "draw %d\n", t);
      return false;
    }
    const auto res = sequential_laterate_first(inst->graph, p);
    const double rho = shape_stats(inst->latent).diameter;
    worst = std::max(worst,
                     embedding_error(res.config, inst->latent) / (rho * rho));
  }
  const double dt = secs(t0);
  const bool ok = worst <= 1e-16 && dt < 30.0;
  std::printf("%s  1  realizable exactness: worst error/rho^2 = %.2e over 50 "
              "instances (tol 1e-16, %.1fs)\n", ok ? "PASS" : "FAIL", worst,
              dt);
  return ok;
}

// 2. Log-log slope of median error vs median perturbation on the r = 0.3 grid.
bool criterion_perturbation_slope() {
  const auto t0 = Clock::now();
  const auto run = bench::run_scenario(desk_grid());
  const auto fit = bench::loglog_slope(run.rows, "seq-lateration-first");
  const double dt = secs(t0);
  const bool ok = fit.slope >= 0.8 && fit.slope <= 1.2 && dt < 300.0;
  std::printf("%s  2  perturbation-law slope: %.3f vs band [0.80, 1.20] "
              "(r2=%.3f, %d levels, %.1fs)\n", ok ? "PASS" : "FAIL",
              fit.slope, fit.r2, fit.levels, dt);
  return ok;
}

// 3. Stress minimizers from a lateration start stay near it and inside the
//    error band.
bool criterion_minimizer_stability() {
  const auto t0 = Clock::now();
  auto cfg = desk_grid();
  cfg.methods = {bench::method::seq_first, bench::method::gd,
                 bench::method::smacof};
  const auto run = bench::run_scenario(cfg);
  const auto seq = level_medians(run.rows, "seq-lateration-first",
                                 &bench::ResultRow::embedding_error);
  const auto pert = level_medians(run.rows, "seq-lateration-first",
                                  &bench::ResultRow::mean_perturbation);
  bool ok = true;
  double worst_ratio = 0.0, worst_band = 0.0;
  for (const char* m : {"gd", "smacof"}) {
    const auto med = level_medians(run.rows, m,
                                   &bench::ResultRow::embedding_error);
    for (const auto& [sigma2, err] : med) {
      worst_ratio = std::max(worst_ratio, err / seq.at(sigma2));
      worst_band = std::max(worst_band, err / pert.at(sigma2));
      if (err > 1.1 * seq.at(sigma2) || err > 1e3 * pert.at(sigma2))
        ok = false;
    }
  }
  const double dt = secs(t0);
  ok = ok && dt < 900.0;
  std::printf("%s  3  minimizer stability: worst err/seq = %.3f (cap 1.10), "
              "worst err/perturbation = %.0f (cap 1000) per-level medians "
              "(%.1fs)\n", ok ? "PASS" : "FAIL", worst_ratio, worst_band, dt);
  return ok;
}

// 4. Scaled-configuration lower bound on the Procrustes error.
bool criterion_lower_bound() {
  const auto t0 = Clock::now();
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 20 && ok; ++seed) {
    const auto latent = testutil::random_config(seed + 600, 30, 2, 0.5);
    const auto topo = geometric_graph(latent, 0.4);
    for (const double eta : {0.8, 0.9, 0.99}) {
      const auto inst = make_scaling_instance(latent, topo, eta);
      if (s_stress(inst.analytic_minimizer, inst.graph) != 0.0) ok = false;
      const double err =
          procrustes_align(inst.latent, inst.analytic_minimizer).error;
      if (err < inst.a_const * inst.eps_sq_sum) ok = false;
    }
  }
  const double dt = secs(t0);
  ok = ok && dt < 10.0;
  std::printf("%s  4  scaling lower bound: 20 latents x eta {0.8, 0.9, 0.99}, "
              "zero-stress minimizer and error >= sum/(8*max_degree) "
              "(%.1fs)\n", ok ? "PASS" : "FAIL", dt);
  return ok;
}

// 5. Analytic s-stress gradient against central finite differences.
bool criterion_gradient() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto latent = testutil::random_config(seed + 20, 12, 2, 1.0);
    const auto noisy = apply_noise(geometric_graph(latent, 0.8),
                                   {noise_model::additive_gaussian, 1e-2,
                                    seed + 21});
    const auto y = testutil::gaussian_config(seed + 90, 12, 2, 1.0);
    const Eigen::MatrixXd analytic = s_stress_gradient(y, noisy.graph);
    auto f = [&](const Eigen::VectorXd& flat) {
      const Eigen::MatrixXd m =
          Eigen::Map<const Eigen::MatrixXd>(flat.data(), 12, 2);
      return s_stress(Configuration(m), noisy.graph);
    };
    const Eigen::VectorXd flat =
        Eigen::Map<const Eigen::VectorXd>(y.points().data(), 24);
    const Eigen::VectorXd fd = oracles::fd_gradient(f, flat, 1e-5);
    const Eigen::MatrixXd fd_m =
        Eigen::Map<const Eigen::MatrixXd>(fd.data(), 12, 2);
    worst = std::max(worst, (analytic - fd_m).norm() / analytic.norm());
  }
  const bool ok = worst <= 1e-6;
  std::printf("%s  5  gradient vs finite differences: worst relative "
              "deviation %.2e (tol 1e-6, %.1fs)\n", ok ? "PASS" : "FAIL",
              worst, secs(t0));
  return ok;
}

// 6. SMACOF raw stress never increases.
bool criterion_smacof_monotone() {
  const auto t0 = Clock::now();
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto noisy = connected_noisy(seed + 60, 18, 0.8, 1e-3);
    OptimizerConfig oc = default_smacof_config();
    oc.record_trace = true;
    const auto res = minimize_smacof(noisy.graph, 2,
                                     random_init(noisy.graph, 2, seed + 1),
                                     oc);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : res.trace) {
      if (row.stress > prev) ++violations;
      prev = row.stress;
    }
  }
  const bool ok = violations == 0;
  std::printf("%s  6  SMACOF monotonicity: %d violations over 20 instances "
              "(%.1fs)\n", ok ? "PASS" : "FAIL", violations, secs(t0));
  return ok;
}

// 7. Closed-form amplification constant equals the step recursion.
bool criterion_bound_consistency() {
  const auto t0 = Clock::now();
  const OrderingOptions minimal{clique_strategy::minimal, 20, -1};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t s = rng::derive(7500, {(std::uint64_t)t});
    rng::Stream ps(s, 3);
    const int n = 10 + (int)(ps.uniform() * 31.0);
    const auto inst = laterable_rgg(s, n, 2, 0.6);
    if (!inst) {
      std::printf("FAIL  7  bound consistency: no laterable instance for "
                  "draw %d\n", t);
      return false;
    }
    const auto ord = find_laterative_ordering(inst->graph, 2, minimal);
    const auto tb = theory_bound(inst->latent, *ord, 1.5, 1.5, 2);
    const double w2 = tb.omega_min * tb.omega_min;
    const double base = 1.0 + 1.5 * tb.alpha;
    double a_k = 1.5 * tb.alpha / (3.0 * w2);
    for (int k = 3; k < n; ++k) a_k = std::max(base * a_k, 1.5 / (3.0 * w2));
    worst = std::max(worst, std::abs(tb.A_n - a_k) / a_k);
  }
  const bool ok = worst <= 1e-12;
  std::printf("%s  7  bound consistency: closed form vs recursion, worst "
              "relative gap %.2e over 20 orderings (tol 1e-12, %.1fs)\n",
              ok ? "PASS" : "FAIL", worst, secs(t0));
  return ok;
}

// 8. Lateration orderings appear more often as n grows, and never vanish
//    as r grows.
bool criterion_rgg_lateration() {
  const auto t0 = Clock::now();
  std::vector<double> freq;
  for (const int n : {100, 200, 400, 800}) {
    int ok_count = 0;
    for (int t = 0; t < 20; ++t) {
      const auto latent = sample_domain(
          DomainSpec{0.2, 1.0}, n,
          rng::derive(8800, {(std::uint64_t)n, (std::uint64_t)t}));
      if (find_laterative_ordering(geometric_graph(latent, 0.40), 2))
        ++ok_count;
    }
    freq.push_back(ok_count / 20.0);
  }
  int inversions = 0;
  double max_drop = 0.0;
  for (std::size_t i = 0; i + 1 < freq.size(); ++i)
    if (freq[i + 1] < freq[i]) {
      ++inversions;
      max_drop = std::max(max_drop, freq[i] - freq[i + 1]);
    }

  int radius_violations = 0;
  for (int t = 0; t < 20; ++t) {
    const auto latent = sample_domain(DomainSpec{0.2, 1.0}, 300,
                                      rng::derive(8900, {(std::uint64_t)t}));
    bool prev = false;
    for (const double r : {0.25, 0.32, 0.4, 0.5, 0.65}) {
      const bool now =
          find_laterative_ordering(geometric_graph(latent, r), 2).has_value();
      if (prev && !now) ++radius_violations;
      prev = now;
    }
  }
  const bool ok = (inversions == 0 || (inversions == 1 && max_drop <= 0.02)) &&
                  radius_violations == 0;
  std::printf("%s  8  lateration frequency: n sweep {%.2f, %.2f, %.2f, %.2f} "
              "at r=0.40, %d inversions; %d radius violations (%.1fs)\n",
              ok ? "PASS" : "FAIL", freq[0], freq[1], freq[2], freq[3],
              inversions, radius_violations, secs(t0));
  return ok;
}

// 9. Sequential lateration is at least 10x faster than either optimizer
//    at n = 2000.
bool criterion_timing() {
  const auto t0 = Clock::now();
  const auto pre = bench::preset("fig3b");
  const auto run = bench::timing_study(pre.scenarios[0], pre.n_grid);
  const double seq = bench::median_wall_ms(run.rows, "seq-lateration-first",
                                           2000);
  const double gd = bench::median_wall_ms(run.rows, "gd", 2000);
  const double smacof = bench::median_wall_ms(run.rows, "smacof", 2000);
  const bool ok = seq <= gd / 10.0 && seq <= smacof / 10.0;
  std::printf("%s  9  timing at n=2000: seq %.1fms, gd %.1fms (%.1fx), "
              "smacof %.1fms (%.1fx); need >= 10x (%.1fs)\n",
              ok ? "PASS" : "FAIL", seq, gd, gd / seq, smacof, smacof / seq,
              secs(t0));
  return ok;
}

// 10. Re-running a preset reproduces the CSV except for wall times.
bool criterion_determinism() {
  const auto t0 = Clock::now();
  auto run_once = [] {
    std::vector<bench::ResultRow> all;
    for (const auto& cfg : bench::preset("fig2b").scenarios) {
      const auto run = bench::run_scenario(cfg);
      all.insert(all.end(), run.rows.begin(), run.rows.end());
    }
    for (auto& row : all) row.wall_time_ms = 0.0;
    return bench::rows_to_csv(all);
  };
  const std::string a = run_once();
  const std::string b = run_once();
  const bool ok = a == b && !a.empty();
  std::printf("%s 10  determinism: fig2b twice -> CSV %s modulo wall times "
              "(%.1fs)\n", ok ? "PASS" : "FAIL",
              ok ? "byte-identical" : "differs", secs(t0));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<bool()>> criteria = {
      criterion_realizable_exactness, criterion_perturbation_slope,
      criterion_minimizer_stability,  criterion_lower_bound,
      criterion_gradient,             criterion_smacof_monotone,
      criterion_bound_consistency,    criterion_rgg_lateration,
      criterion_timing,               criterion_determinism,
  };

  int failures = 0;
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > (int)criteria.size()) {
      std::fprintf(stderr, "criterion index must be 1..%zu\n",
                   criteria.size());
      return 64;
    }
    failures = criteria[k - 1]() ? 0 : 1;
  } else {
    for (const auto& c : criteria)
      if (!c()) ++failures;
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
  }
  return failures;
}
