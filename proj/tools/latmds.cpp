#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "latmds/bench.hpp"
#include "latmds/io.hpp"
#include "latmds/svg.hpp"

namespace fs = std::filesystem;
using namespace latmds;

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  detail::require(!ec, errc::io_failure, "cannot create directory: " + dir);
}

io::GraphFile load_graph(const std::string& path) {
  return io::graph_from_csv(io::read_file(path));
}

Configuration load_config(const std::string& path) {
  return io::config_from_csv(io::read_file(path));
}

void print_embedding_summary(const EmbeddingResult& res,
                             const std::optional<Configuration>& latent) {
  std::printf("nodes=%d stress=%s wall_time_ms=%.3f\n", res.config.size(),
              io::fmt_double(res.stress).c_str(), res.wall_time * 1e3);
  if (latent)
    std::printf("embedding_error=%s\n",
                io::fmt_double(embedding_error(res.config, *latent)).c_str());
}

int run_gen(int n, double h, double kappa, double r, double sigma2,
            const std::string& model, std::uint64_t seed,
            const std::string& out) {
  ensure_dir(out);
  const Configuration latent = sample_domain(DomainSpec{h, kappa}, n, seed);
  const DissimilarityGraph clean = geometric_graph(latent, r);

  NoiseSpec spec;
  spec.variance = sigma2;
  spec.seed = rng::derive(seed, {1});
  if (model == "additive")
    spec.model = noise_model::additive_gaussian;
  else if (model == "multiplicative")
    spec.model = noise_model::multiplicative_gaussian;
  else
    detail::require(model == "none", errc::invalid_input,
                    "noise model must be none, additive, or multiplicative");
  const NoiseResult noise = apply_noise(clean, spec);

  io::write_file(join(out, "latent.csv"), io::config_to_csv(latent));
  io::write_file(join(out, "graph.csv"), io::graph_to_csv(noise.graph, 2));
  const bool laterable = find_laterative_ordering(clean, 2).has_value();
  std::printf("n=%d edges=%d eps_sq_sum=%s truncations=%d laterable=%d\n", n,
              clean.edge_count(), io::fmt_double(noise.eps_sq_sum).c_str(),
              noise.truncations, laterable ? 1 : 0);
  return 0;
}

int run_laterate(const std::string& graph_path, const std::string& variant,
                 int budget, bool minimal, std::uint64_t seed,
                 const std::string& latent_path, const std::string& out) {
  ensure_dir(out);
  const io::GraphFile gf = load_graph(graph_path);
  OrderingOptions opts;
  if (minimal) opts.strategy = clique_strategy::minimal;

  const EmbeddingResult res =
      variant == "best"
          ? sequential_laterate_best(gf.graph, gf.p, budget, seed)
          : sequential_laterate_first(gf.graph, gf.p, opts);

  io::write_file(join(out, "embedding.csv"), io::config_to_csv(res.config));
  io::write_file(join(out, "embedding.json"), io::result_sidecar_json(res));
  std::optional<Configuration> latent;
  if (!latent_path.empty()) latent = load_config(latent_path);
  print_embedding_summary(res, latent);
  return 0;
}

int run_stress_min(const std::string& graph_path, const std::string& method,
                   const std::string& init, int max_iters, double rel_tol,
                   std::uint64_t seed, const std::string& latent_path,
                   const std::string& out) {
  ensure_dir(out);
  const io::GraphFile gf = load_graph(graph_path);

  Configuration start = [&] {
    if (init == "seq") return sequential_laterate_first(gf.graph, gf.p).config;
    if (init == "random") return random_init(gf.graph, gf.p, seed);
    return load_config(init);
  }();

  OptimizerConfig oc =
      method == "smacof" ? default_smacof_config() : default_gd_config();
  if (max_iters > 0) oc.max_iters = max_iters;
  if (rel_tol > 0.0) oc.rel_tol = rel_tol;

  const OptimizeResult res = method == "smacof"
                                 ? minimize_smacof(gf.graph, gf.p, start, oc)
                                 : minimize_gd(gf.graph, gf.p, start, oc);
  io::write_file(join(out, "embedding.csv"), io::config_to_csv(res.config));
  std::printf("s_stress=%s iterations=%d converged=%d\n",
              io::fmt_double(res.s_stress).c_str(), res.iterations,
              res.converged ? 1 : 0);
  if (!latent_path.empty()) {
    const Configuration latent = load_config(latent_path);
    std::printf("embedding_error=%s\n",
                io::fmt_double(embedding_error(res.config, latent)).c_str());
  }
  return 0;
}

int run_bound(const std::string& latent_path, const std::string& graph_path,
              double c1, double c2, bool minimal) {
  const Configuration latent = load_config(latent_path);
  const io::GraphFile gf = load_graph(graph_path);
  OrderingOptions opts;
  if (minimal) opts.strategy = clique_strategy::minimal;
  const auto ordering = find_laterative_ordering(gf.graph, gf.p, opts);
  detail::require(ordering.has_value(), errc::not_laterable,
                  "graph admits no laterative ordering");
  const TheoryBound bound = theory_bound(latent, *ordering, c1, c2, gf.p);
  std::printf("{\"alpha\": %s, \"omega_min\": %s, \"A_n\": %s, "
              "\"sigma4_max\": %s, \"C1\": %s, \"C2\": %s}\n",
              io::fmt_double(bound.alpha).c_str(),
              io::fmt_double(bound.omega_min).c_str(),
              io::fmt_double(bound.A_n).c_str(),
              io::fmt_double(bound.sigma4_max).c_str(),
              io::fmt_double(bound.C1).c_str(),
              io::fmt_double(bound.C2).c_str());
  return 0;
}

void print_scenario_report(const std::string& id,
                           const std::vector<bench::ResultRow>& rows) {
  std::vector<std::string> methods;
  for (const auto& row : rows)
    if (row.scenario == id &&
        std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);
  for (const auto& m : methods) {
    std::vector<bench::ResultRow> mine;
    for (const auto& row : rows)
      if (row.scenario == id) mine.push_back(row);
    try {
      const auto fit = bench::loglog_slope(mine, m);
      std::printf("  %-22s slope=%.3f intercept=%.3f r2=%.4f levels=%d\n",
                  m.c_str(), fit.slope, fit.intercept, fit.r2, fit.levels);
    } catch (const error&) {
      std::printf("  %-22s (too few noise levels for a slope fit)\n",
                  m.c_str());
    }
  }
}

int run_exp(const std::string& preset_name, const std::string& config_path,
            int trials_override, std::optional<std::uint64_t> seed_override,
            int threads, const std::string& out) {
  ensure_dir(out);
  bench::Preset preset;
  if (!config_path.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_file(config_path));
    } catch (const nlohmann::json::exception& e) {
      throw error(errc::invalid_input,
                  std::string("cannot parse scenario JSON: ") + e.what());
    }
    preset.name = "custom";
    preset.scenarios.push_back(bench::scenario_from_json(j));
  } else {
    preset = bench::preset(preset_name);
  }
  for (auto& cfg : preset.scenarios) {
    if (trials_override > 0) cfg.trials = trials_override;
    if (seed_override) cfg.seed = *seed_override;
  }

  std::vector<bench::ResultRow> all;
  int resamples = 0;
  for (const auto& cfg : preset.scenarios) {
    const bench::RunResult run =
        preset.n_grid.empty()
            ? bench::run_scenario(cfg, threads)
            : bench::timing_study(cfg, preset.n_grid, threads);
    resamples += run.resamples;
    all.insert(all.end(), run.rows.begin(), run.rows.end());
  }

  const std::string csv_path = join(out, preset.name + "-rows.csv");
  const std::string svg_path = join(out, preset.name + "-scatter.svg");
  bench::emit_csv(all, csv_path);
  bench::emit_svg(all, svg_path, preset.name);
  std::printf("wrote %s (%zu rows, %d resamples) and %s\n", csv_path.c_str(),
              all.size(), resamples, svg_path.c_str());

  for (const auto& cfg : preset.scenarios) {
    std::printf("%s:\n", cfg.id.c_str());
    print_scenario_report(cfg.id, all);
    if (!preset.n_grid.empty()) {
      for (const int n : preset.n_grid) {
        std::printf("  n=%-5d", n);
        for (const bench::method m : cfg.methods)
          std::printf(" %s=%.2fms", bench::method_name(m),
                      bench::median_wall_ms(all, bench::method_name(m), n));
        std::printf("\n");
      }
    }
  }
  return 0;
}

int run_plot(const std::string& rows_path, const std::string& latent_path,
             const std::string& embedding_path, const std::string& title,
             const std::string& out_file) {
  detail::require(!out_file.empty(), errc::invalid_input,
                  "plot needs --out-file");
  if (!rows_path.empty()) {
    const auto rows = bench::rows_from_csv(io::read_file(rows_path));
    io::write_file(out_file, bench::rows_to_svg(rows, title));
  } else {
    detail::require(!latent_path.empty(), errc::invalid_input,
                    "plot needs --rows or --latent");
    const Configuration latent = load_config(latent_path);
    std::vector<svg::Series> series{{"latent", svg::points_of(latent)}};
    if (!embedding_path.empty()) {
      const Configuration embedded = load_config(embedding_path);
      const auto aligned = procrustes_align(embedded, latent);
      series.push_back({"embedding (aligned)",
                        svg::points_of(aligned.transform.apply(embedded))});
    }
    svg::Options opts;
    opts.title = title;
    io::write_file(out_file, svg::config_scatter(series, opts));
  }
  std::printf("wrote %s\n", out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anchor-free graph embedding experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = ".";
  std::string config_path;
  app.add_option("--seed", seed, "base RNG seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--out", out, "output directory (default .)");
  app.add_option("--config", config_path, "scenario config JSON (exp)");

  auto* gen = app.add_subcommand("gen", "sample a latent configuration and "
                                        "its noisy geometric graph");
  int gen_n = 500;
  double gen_h = 0.2, gen_kappa = 1.0, gen_r = 0.3, gen_sigma2 = 0.0;
  std::string gen_model = "additive";
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--hollow", gen_h, "hollow fraction of the domain");
  gen->add_option("--kappa", gen_kappa, "domain scale");
  gen->add_option("--r", gen_r, "connectivity radius");
  gen->add_option("--sigma2", gen_sigma2, "noise variance");
  gen->add_option("--model", gen_model, "none | additive | multiplicative");

  auto* lat = app.add_subcommand("laterate", "sequential lateration of a "
                                             "dissimilarity graph");
  std::string lat_graph, lat_variant = "first", lat_latent;
  int lat_budget = 200;
  bool lat_minimal = false;
  lat->add_option("--graph", lat_graph, "graph CSV")->required();
  lat->add_option("--method", lat_variant, "first | best");
  lat->add_option("--budget", lat_budget, "seed cliques tried by 'best'");
  lat->add_flag("--minimal", lat_minimal, "use a minimal (p+1)-seed clique");
  lat->add_option("--latent", lat_latent, "latent CSV for the error report");

  auto* sm = app.add_subcommand("stress-min", "s-stress / stress "
                                              "minimization");
  std::string sm_graph, sm_method = "gd", sm_init = "seq", sm_latent;
  int sm_iters = 0;
  double sm_rel_tol = 0.0;
  sm->add_option("--graph", sm_graph, "graph CSV")->required();
  sm->add_option("--method", sm_method, "gd | smacof");
  sm->add_option("--init", sm_init, "seq | random | <configuration CSV>");
  sm->add_option("--max-iters", sm_iters, "iteration cap override");
  sm->add_option("--rel-tol", sm_rel_tol, "relative tolerance override");
  sm->add_option("--latent", sm_latent, "latent CSV for the error report");

  auto* bound = app.add_subcommand("bound", "stability-bound constants for a "
                                            "latent configuration");
  std::string bound_latent, bound_graph;
  double bound_c1 = 1.5, bound_c2 = 1.5;
  bool bound_minimal = false;
  bound->add_option("--latent", bound_latent, "latent CSV")->required();
  bound->add_option("--graph", bound_graph, "graph CSV")->required();
  bound->add_option("--c1", bound_c1, "scaling constant C1 (>= 1)");
  bound->add_option("--c2", bound_c2, "lateration constant C2 (>= 1)");
  bound->add_flag("--minimal", bound_minimal,
                  "use a minimal (p+1)-seed clique");

  auto* exp = app.add_subcommand("exp", "run an experiment preset");
  std::string exp_preset = "fig2b";
  int exp_trials = 0, exp_threads = 0;
  exp->add_option("--preset", exp_preset,
                  "fig2a | fig2a-rescaled | fig2b | fig2c | fig3a | fig3b");
  exp->add_option("--trials", exp_trials, "override trials per cell");
  exp->add_option("--threads", exp_threads, "worker threads (0 = auto)");

  auto* plot = app.add_subcommand("plot", "render result rows or "
                                          "configurations as SVG");
  std::string plot_rows, plot_latent, plot_embedding, plot_title;
  std::string plot_out = "plot.svg";
  plot->add_option("--rows", plot_rows, "result rows CSV");
  plot->add_option("--latent", plot_latent, "latent configuration CSV");
  plot->add_option("--embedding", plot_embedding,
                   "embedding CSV to overlay (aligned via Procrustes)");
  plot->add_option("--title", plot_title, "plot title");
  plot->add_option("--out-file", plot_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return run_gen(gen_n, gen_h, gen_kappa, gen_r, gen_sigma2, gen_model,
                     seed, out);
    if (lat->parsed())
      return run_laterate(lat_graph, lat_variant, lat_budget, lat_minimal,
                          seed, lat_latent, out);
    if (sm->parsed())
      return run_stress_min(sm_graph, sm_method, sm_init, sm_iters,
                            sm_rel_tol, seed, sm_latent, out);
    if (bound->parsed())
      return run_bound(bound_latent, bound_graph, bound_c1, bound_c2,
                       bound_minimal);
    if (exp->parsed())
      return run_exp(exp_preset, config_path, exp_trials,
                     seed_given ? std::optional<std::uint64_t>(seed)
                                : std::nullopt,
                     exp_threads, out);
    if (plot->parsed())
      return run_plot(plot_rows, plot_latent, plot_embedding, plot_title,
                      plot_out);
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.code()) {
      case errc::invalid_input: return 2;
      case errc::scenario_infeasible: return 3;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
