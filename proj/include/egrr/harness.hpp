#pragma once

// Simulation-versus-recurrence experiments and their plain-text outputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "egrr/analysis.hpp"
#include "egrr/config.hpp"
#include "egrr/core.hpp"
#include "egrr/grr.hpp"
#include "egrr/metrics.hpp"
#include "egrr/simulator.hpp"

namespace egrr {

struct ErrorRow {
  Compartment state = Compartment::Infected;
  GrrVariant variant = GrrVariant::Global;
  double rho0 = 0.0;
  double kappa = 0.0;
  std::int32_t t_infect = 0;
  std::int32_t t_recover = 0;
  double nu = 0.0;
};

struct CompareReport {
  SimParams params;
  BatchResult batch;
  std::vector<std::pair<GrrVariant, Trajectory>> curves;
  std::vector<ErrorRow> errors;

  /// nu for (state, variant), if that variant was run.
  std::optional<double> nu(Compartment state, GrrVariant variant) const {
    for (const auto& e : errors)
      if (e.state == state && e.variant == variant) return e.nu;
    return std::nullopt;
  }
};

inline constexpr Compartment kComparedStates[] = {Compartment::Infected, Compartment::Recovered};

/// Batch-simulates `params`, runs each requested recurrence over the same
/// iterations and scores it against the simulation mean (iterations 1..M).
inline CompareReport compare(const SimParams& params, std::int64_t replicates,
                             const std::vector<GrrVariant>& variants, unsigned threads = 0) {
  CompareReport rep;
  rep.params = validate(params);
  rep.batch = simulate_batch(params, replicates, threads);
  for (GrrVariant v : variants) {
    rep.curves.emplace_back(v, grr_trajectory(v, params));
    const Trajectory& g = rep.curves.back().second;
    for (Compartment c : kComparedStates) {
      ErrorRow row{c, v, params.rho0, params.kappa, params.t_infect, params.t_recover, 0.0};
      row.nu = curve_error(curve_of(rep.batch.mean, c), curve_of(g, c));
      rep.errors.push_back(row);
    }
  }
  return rep;
}

// --- error surface ------------------------------------------------------------

struct SweepSpec {
  SimParams base;
  std::vector<Axis> axes;  // at most two; the first varies slowest
  std::int64_t replicates = 100;
  std::int32_t iterations = 150;
  std::string out_dir;
  unsigned threads = 0;
};

struct SurfaceCell {
  SimParams params;
  double expected_initial_susceptibles = 0.0;
  double kappa = 0.0;
  double nu_infected = std::numeric_limits<double>::quiet_NaN();
  double died_out_fraction = 0.0;
  bool flagged = false;  // simulation mean was identically zero
};

/// Radius at which (N - 1) pi rho0^2 equals `expected` on the unit square.
inline double rho0_for_expected_susceptibles(std::int64_t n_agents, double expected) {
  return std::sqrt(expected / (kPi * static_cast<double>(n_agents - 1)));
}

/// Applies one axis value to `p`.
inline void apply_axis(SimParams& p, const std::string& name, double value) {
  if (name == "expected_susceptibles") p.rho0 = rho0_for_expected_susceptibles(p.n_agents, value);
  else set_param(p, name, value);
}

/// Expands the axes into the validated parameter sets of every cell, in
/// row-major order (first axis slowest).
inline std::vector<SimParams> sweep_cells(const SweepSpec& spec) {
  if (spec.axes.size() > 2) throw ValidationError({"at most two sweep axes"});
  std::vector<SimParams> cells{spec.base};
  for (const auto& axis : spec.axes) {
    std::vector<SimParams> next;
    for (const auto& c : cells)
      for (double v : axis.values) {
        SimParams p = c;
        apply_axis(p, axis.name, v);
        next.push_back(p);
      }
    cells = std::move(next);
  }
  for (auto& c : cells) {
    c.n_iters = spec.iterations;
    validate(c);
  }
  return cells;
}

/// One cell: batch simulation and the locally homogeneous recurrence, scored
/// on infected. Same seeds and iteration count as compare() for that cell.
inline SurfaceCell surface_cell(const SimParams& p, std::int64_t replicates, unsigned threads = 1) {
  SurfaceCell cell;
  cell.params = p;
  cell.expected_initial_susceptibles = p.expected_initial_susceptibles();
  cell.kappa = p.kappa;
  const BatchResult batch = simulate_batch(p, replicates, threads);
  cell.died_out_fraction = batch.died_out_fraction();
  try {
    cell.nu_infected = curve_error(curve_of(batch.mean, Compartment::Infected),
                                   curve_of(local_trajectory(p), Compartment::Infected));
  } catch (const std::domain_error&) {
    cell.flagged = true;
  }
  return cell;
}

/// Cells run in parallel; results are stored by cell index, so the output
/// does not depend on scheduling.
inline std::vector<SurfaceCell> error_surface(const SweepSpec& spec) {
  const auto params = sweep_cells(spec);
  std::vector<SurfaceCell> cells(params.size());
  parallel_for(params.size(), spec.threads,
               [&](std::size_t k) { cells[k] = surface_cell(params[k], spec.replicates, 1); });
  return cells;
}

// --- writers ---------------------------------------------------------------------

namespace detail {

inline std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  using detail::fmt_real;
  os << "t,s,i,r\n";
  for (const auto& c : tr)
    os << c.t << ',' << fmt_real(c.s) << ',' << fmt_real(c.i) << ',' << fmt_real(c.r) << '\n';
}

/// Recurrence output: the simulation schema plus a trailing variant column.
inline void write_grr_csv(std::ostream& os, const Trajectory& tr, GrrVariant v) {
  using detail::fmt_real;
  os << "t,s,i,r,variant\n";
  for (const auto& c : tr)
    os << c.t << ',' << fmt_real(c.s) << ',' << fmt_real(c.i) << ',' << fmt_real(c.r) << ','
       << to_string(v) << '\n';
}

inline void write_batch_csv(std::ostream& os, const BatchResult& b) {
  using detail::fmt_real;
  os << "t,s_mean,i_mean,r_mean,s_std,i_std,r_std\n";
  for (std::size_t k = 0; k < b.mean.size(); ++k) {
    const auto& m = b.mean[k];
    const auto& d = b.stddev[k];
    os << m.t << ',' << fmt_real(m.s) << ',' << fmt_real(m.i) << ',' << fmt_real(m.r) << ','
       << fmt_real(d.s) << ',' << fmt_real(d.i) << ',' << fmt_real(d.r) << '\n';
  }
}

inline void write_snapshot_csv(std::ostream& os, const Population& pop) {
  using detail::fmt_real;
  os << "agent_id,state,stage,x,y\n";
  for (std::size_t k = 0; k < pop.size(); ++k)
    os << k << ',' << to_string(pop.states[k].kind) << ',' << pop.states[k].stage << ','
       << fmt_real(pop.positions[k].x) << ',' << fmt_real(pop.positions[k].y) << '\n';
}

inline void write_errors_header(std::ostream& os) {
  os << "state,variant,rho0,kappa,t_infect,t_recover,nu\n";
}

inline void write_error_rows(std::ostream& os, const std::vector<ErrorRow>& rows) {
  using detail::fmt_real;
  for (const auto& e : rows)
    os << to_string(e.state) << ',' << to_string(e.variant) << ',' << fmt_real(e.rho0) << ','
       << fmt_real(e.kappa) << ',' << e.t_infect << ',' << e.t_recover << ',' << fmt_real(e.nu)
       << '\n';
}

inline void write_surface_csv(std::ostream& os, const std::vector<SurfaceCell>& cells) {
  using detail::fmt_real;
  os << "expected_initial_susceptibles,kappa,rho0,nu_infected,died_out_fraction,flagged\n";
  for (const auto& c : cells)
    os << fmt_real(c.expected_initial_susceptibles) << ',' << fmt_real(c.kappa) << ','
       << fmt_real(c.params.rho0) << ',' << (c.flagged ? "nan" : fmt_real(c.nu_infected)) << ','
       << fmt_real(c.died_out_fraction) << ',' << (c.flagged ? 1 : 0) << '\n';
}

inline nlohmann::ordered_json to_json(const FixedPointReport& r) {
  auto cplx = [](std::complex<double> z) {
    return nlohmann::ordered_json{{"re", z.real()}, {"im", z.imag()}};
  };
  nlohmann::ordered_json j;
  j["I"] = r.location.i;
  j["R"] = r.location.r;
  j["jacobian"] = {{r.jacobian.a11, r.jacobian.a12}, {r.jacobian.a21, r.jacobian.a22}};
  j["eigenvalues"] = {cplx(r.eigenvalues[0]), cplx(r.eigenvalues[1])};
  j["classification"] = to_string(r.classification);
  j["residual"] = r.residual;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::ordered_json fixed_points_json(const SimParams& p,
                                                const std::vector<FixedPointReport>& fps) {
  nlohmann::ordered_json j;
  j["params"] = {{"n_agents", p.n_agents}, {"rho0", p.rho0},         {"kappa", p.kappa},
                 {"t_infect", p.t_infect}, {"t_recover", p.t_recover}, {"q", p.q()}};
  j["fixed_points"] = nlohmann::ordered_json::array();
  for (const auto& f : fps) j["fixed_points"].push_back(to_json(f));
  return j;
}

/// Opens `dir / name` for writing, creating `dir` if needed.
inline std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::ofstream os(dir / name);
  if (!os) throw IoError("cannot write '" + (dir / name).string() + "'");
  return os;
}

/// Writes params.snapshot, trajectory_sim_mean.csv, trajectory_<variant>.csv
/// and errors.csv for one comparison.
inline void write_compare_outputs(const std::filesystem::path& dir, const CompareReport& rep) {
  open_output(dir, "params.snapshot") << params_snapshot(rep.params);
  {
    auto os = open_output(dir, "trajectory_sim_mean.csv");
    write_batch_csv(os, rep.batch);
  }
  for (const auto& [v, tr] : rep.curves) {
    auto os = open_output(dir, std::string("trajectory_") + to_string(v) + ".csv");
    write_grr_csv(os, tr, v);
  }
  auto os = open_output(dir, "errors.csv");
  write_errors_header(os);
  write_error_rows(os, rep.errors);
}

}  // namespace egrr
