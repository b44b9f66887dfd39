// egrr: command-line front end for the epidemic agent simulation and its
// recurrence approximations.
//
//   egrr simulate      --config FILE [--replicates N] [--out DIR] [--snapshot T ...]
//   egrr grr           --config FILE [--variant global|local|sparse ...] [--out DIR]
//   egrr fixed-points  --config FILE [--out DIR]
//   egrr compare       --config FILE [--replicates N] [--variant ...] [--out DIR]
//   egrr surface       --config FILE [--replicates N] [--out DIR]
//
// Exit status: 0 success, 2 invalid arguments or parameters, 3 I/O failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "egrr/egrr.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> replicates;
  std::optional<std::int32_t> iters;
  std::optional<unsigned> threads;
  std::optional<std::string> clock;
  std::string out;
  std::vector<std::string> variants;
  std::vector<std::int64_t> snapshots;
};

egrr::HarnessConfig resolve(const Options& o) {
  egrr::HarnessConfig cfg;
  if (!o.config.empty()) cfg = egrr::load_config(o.config);
  if (o.seed) cfg.params.seed = *o.seed;
  if (o.replicates) cfg.replicates = *o.replicates;
  if (o.iters) cfg.params.n_iters = *o.iters;
  if (o.threads) cfg.threads = *o.threads;
  if (o.clock) egrr::set_param(cfg.params, "clock", *o.clock);
  if (!o.variants.empty()) {
    cfg.variants.clear();
    for (const auto& v : o.variants) {
      const auto parsed = egrr::parse_variants(v);
      cfg.variants.insert(cfg.variants.end(), parsed.begin(), parsed.end());
    }
  }
  if (cfg.replicates < 1) throw egrr::ValidationError({"replicates must be >= 1"});
  egrr::validate(cfg.params);
  return cfg;
}

std::filesystem::path out_dir(const Options& o) { return o.out.empty() ? "egrr_out" : o.out; }

int run_simulate(const Options& o) {
  const auto cfg = resolve(o);
  const auto dir = out_dir(o);
  const auto batch = egrr::simulate_batch(cfg.params, cfg.replicates, cfg.threads);
  egrr::open_output(dir, "params.snapshot") << egrr::params_snapshot(cfg.params);
  {
    auto os = egrr::open_output(dir, "trajectory_sim_mean.csv");
    egrr::write_batch_csv(os, batch);
  }
  // Replicate 0 again, for its own trajectory and any requested snapshots.
  const std::set<std::int64_t> wanted(o.snapshots.begin(), o.snapshots.end());
  auto rng = egrr::rng_stream(egrr::replicate_seed(cfg.params.seed, 0));
  const auto first = egrr::simulate(cfg.params, rng, [&](std::int64_t t, const egrr::Population& pop) {
    if (!wanted.contains(t)) return;
    auto os = egrr::open_output(dir, "snapshot_t" + std::to_string(t) + ".csv");
    egrr::write_snapshot_csv(os, pop);
  });
  {
    auto os = egrr::open_output(dir, "trajectory_sim_0.csv");
    egrr::write_trajectory_csv(os, first);
  }
  const auto& last = batch.mean.back();
  std::printf("replicates=%lld died_out=%lld  final mean S=%.1f I=%.1f R=%.1f  -> %s\n",
              static_cast<long long>(batch.replicates), static_cast<long long>(batch.died_out),
              last.s, last.i, last.r, dir.string().c_str());
  return 0;
}

int run_grr(const Options& o) {
  const auto cfg = resolve(o);
  for (auto v : cfg.variants) {
    const auto tr = egrr::grr_trajectory(v, cfg.params);
    if (o.out.empty()) {
      egrr::write_grr_csv(std::cout, tr, v);
    } else {
      auto os = egrr::open_output(o.out, std::string("trajectory_") + egrr::to_string(v) + ".csv");
      egrr::write_grr_csv(os, tr, v);
    }
  }
  return 0;
}

int run_fixed_points(const Options& o) {
  const auto cfg = resolve(o);
  const auto json = egrr::fixed_points_json(cfg.params, egrr::find_fixed_points(cfg.params));
  std::cout << json.dump(2) << '\n';
  if (!o.out.empty()) egrr::open_output(o.out, "fixed_points.json") << json.dump(2) << '\n';
  return 0;
}

int run_compare(const Options& o) {
  const auto cfg = resolve(o);
  const auto dir = out_dir(o);
  const auto rep = egrr::compare(cfg.params, cfg.replicates, cfg.variants, cfg.threads);
  egrr::write_compare_outputs(dir, rep);
  egrr::open_output(dir, "fixed_points.json")
      << egrr::fixed_points_json(cfg.params, egrr::find_fixed_points(cfg.params)).dump(2) << '\n';
  egrr::write_errors_header(std::cout);
  egrr::write_error_rows(std::cout, rep.errors);
  return 0;
}

int run_surface(const Options& o) {
  const auto cfg = resolve(o);
  egrr::SweepSpec spec;
  spec.base = cfg.params;
  spec.replicates = cfg.replicates;
  spec.iterations = o.iters.value_or(150);
  spec.threads = cfg.threads;
  spec.axes = cfg.axes;
  if (spec.axes.empty()) {
    spec.axes = {{"kappa", {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95}},
                 {"expected_susceptibles", {1, 2, 3, 4, 6, 8, 12, 16}}};
  }
  const auto dir = out_dir(o);
  spec.out_dir = dir.string();
  const auto cells = egrr::error_surface(spec);
  egrr::open_output(dir, "params.snapshot") << egrr::params_snapshot(cfg.params);
  auto os = egrr::open_output(dir, "surface.csv");
  egrr::write_surface_csv(os, cells);
  egrr::write_surface_csv(std::cout, cells);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epidemic agent simulation and recurrence-rule comparison"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config, "key = value parameter file");
  app.add_option("--seed", o.seed, "base seed; replicate k uses seed + k");
  app.add_option("--replicates", o.replicates, "simulation replicates");
  app.add_option("--iters", o.iters, "iterations (overrides n_iters; surface default 150)");
  app.add_option("--threads", o.threads, "worker threads (0 = all cores)");
  app.add_option("--clock", o.clock, "residence rule: fixed|geometric");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--variant", o.variants, "recurrence variant(s): global|local|sparse");

  auto* simulate = app.add_subcommand("simulate", "batch simulation -> CSV");
  simulate->add_option("--snapshot", o.snapshots, "dump agent states at these iterations");
  auto* grr = app.add_subcommand("grr", "recurrence trajectories -> CSV");
  auto* fixed = app.add_subcommand("fixed-points", "fixed points and stability -> JSON");
  auto* cmp = app.add_subcommand("compare", "simulation vs recurrence error report");
  auto* surface = app.add_subcommand("surface", "error surface over kappa x expected susceptibles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) return run_simulate(o);
    if (*grr) return run_grr(o);
    if (*fixed) return run_fixed_points(o);
    if (*cmp) return run_compare(o);
    if (*surface) return run_surface(o);
  } catch (const egrr::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const egrr::ValidationError& e) {
    std::cerr << "invalid parameters:\n" << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitValidation;
}
