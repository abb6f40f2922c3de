// Command-line runner for the biological network formation solver.
//
// Usage:
//   bionet run <preset|config-file> [--n-div N] [--dt DT] [--out DIR] ...
//   bionet accuracy <preset> [--levels K] [--n0 N] [--out DIR]
//
// The default output directory is $BIONET_OUT_DIR, or ./out when unset.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "bionet/accuracy.hpp"
#include "bionet/io.hpp"
#include "bionet/model.hpp"

namespace {

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("BIONET_OUT_DIR")) {
    return env;
  }
  return "out";
}

std::string snapshot_name(int step_index, bool final) {
  if (final) {
    return "fields_final.vtk";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fields_step%06d.vtk", step_index);
  return buf;
}

int run_experiment(bionet::ExperimentConfig cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  std::printf("experiment %s: n_div=%d dt=%g T=%g -> %s\n", cfg.name.c_str(),
              cfg.params.n_div, cfg.params.dt, cfg.params.t_final,
              cfg.out_dir.string().c_str());

  bionet::RunOptions opts;
  opts.solver.rel_tolerance = cfg.solver_tol;
  opts.steady_tol = cfg.steady_tol;
  const long long n_steps =
      std::llround(cfg.params.t_final / cfg.params.dt);
  opts.on_record = [&](const bionet::TriMesh& mesh,
                       const bionet::SimState& state,
                       bionet::SimRecord& record) {
    const bool final_step = state.step_index == n_steps;
    const bool cadence = cfg.snapshot_every > 0 &&
                         state.step_index % cfg.snapshot_every == 0;
    if (cfg.write_vtk && (cadence || final_step)) {
      const std::string name = snapshot_name(state.step_index, final_step);
      bionet::write_fields_vtk(mesh, state, cfg.out_dir / name);
      record.snapshot = name;
      std::printf(
          "step %6d  t=%-8g E=%-12.6g dC/dt=%-10.4g min_eig=%-10.4g -> %s\n",
          state.step_index, state.time, record.energy, record.increment_norm,
          bionet::min_nodal_eigenvalue(state.conductivity), name.c_str());
      std::fflush(stdout);
    }
  };

  bionet::SimResult result = bionet::run_simulation(cfg.params, opts);

  if (cfg.write_csv) {
    bionet::write_energy_csv(result.records, cfg.out_dir / "energy.csv");
  }
  if (cfg.write_vtk && result.records.back().snapshot.empty()) {
    // The run stopped early at steady state; still emit the final fields.
    bionet::write_fields_vtk(result.mesh, result.final_state,
                             cfg.out_dir / snapshot_name(0, true));
  }

  const bionet::SimRecord& last = result.records.back();
  std::printf("finished at t=%g after %d steps: energy=%.10g%s\n", last.time,
              result.final_state.step_index, last.energy,
              result.reached_steady_state ? " (steady state)" : "");
  return 0;
}

int run_accuracy(const bionet::ExperimentConfig& cfg, int levels, int n0) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  std::vector<int> n_divs;
  for (int i = 0; i < levels; ++i) {
    n_divs.push_back(n0 << i);
  }
  std::printf("accuracy study %s: %d levels from h=1/%d (dt=h)\n",
              cfg.name.c_str(), levels, n0);

  bionet::SolverConfig solver;
  solver.rel_tolerance = cfg.solver_tol;
  const auto rows = bionet::richardson_study(
      cfg.params, n_divs, solver, [](const bionet::ConvergenceRow& row) {
        if (std::isnan(row.order)) {
          std::printf("h=%-9g error=%.7g\n", row.h, row.error);
        } else {
          std::printf("h=%-9g error=%.7g order=%.3f\n", row.h, row.error,
                      row.order);
        }
        std::fflush(stdout);
      });

  const fs::path csv = cfg.out_dir / ("accuracy_" + cfg.name + ".csv");
  bionet::write_convergence_csv(rows, csv);
  std::printf("\n%s\nwrote %s\n",
              bionet::format_convergence_table(rows).c_str(),
              csv.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver for biological transport network "
               "formation (pressure-coupled conductivity tensor model)"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string out_dir;
  int n_div = 0;
  double dt = 0.0;
  double t_final = 0.0;
  int snapshot_every = -1;
  double steady_tol = 0.0;
  double solver_tol = 0.0;
  bool serial = false;
  std::vector<std::string> formats;

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("config", config_arg, "preset name or config file")
      ->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--n-div", n_div, "mesh subdivisions per side")
      ->check(CLI::PositiveNumber);
  run->add_option("--dt", dt, "time step")->check(CLI::PositiveNumber);
  run->add_option("--t-final", t_final, "final time")
      ->check(CLI::PositiveNumber);
  run->add_option("--snapshot-every", snapshot_every,
                  "steps between VTK snapshots (0 disables)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--steady-tol", steady_tol,
                  "steady-state threshold on the relative increment norm")
      ->check(CLI::PositiveNumber);
  run->add_option("--solver-tol", solver_tol, "linear solver tolerance")
      ->check(CLI::PositiveNumber);
  run->add_flag("--serial", serial,
                "force deterministic single-threaded execution");
  run->add_option("--format", formats, "output formats (vtk, csv)")
      ->check(CLI::IsMember({"vtk", "csv"}));

  int levels = 4;
  int n0 = 20;
  CLI::App* accuracy =
      app.add_subcommand("accuracy", "Richardson convergence study");
  accuracy->add_option("config", config_arg, "preset name or config file")
      ->required();
  accuracy->add_option("--levels", levels, "number of mesh levels")
      ->check(CLI::Range(2, 12));
  accuracy->add_option("--n0", n0, "coarsest subdivisions per side")
      ->check(CLI::PositiveNumber);
  accuracy->add_option("--out", out_dir, "output directory");
  accuracy->add_option("--solver-tol", solver_tol, "linear solver tolerance")
      ->check(CLI::PositiveNumber);
  accuracy->add_flag("--serial", serial,
                     "force deterministic single-threaded execution");

  CLI11_PARSE(app, argc, argv);

  try {
    bionet::ExperimentConfig cfg = bionet::load_config(config_arg);
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
    } else if (cfg.out_dir.empty()) {
      cfg.out_dir = default_out_dir();
    }
    if (n_div > 0) {
      cfg.params.n_div = n_div;
    }
    if (dt > 0.0) {
      cfg.params.dt = dt;
    }
    if (t_final > 0.0) {
      cfg.params.t_final = t_final;
    }
    if (snapshot_every >= 0) {
      cfg.snapshot_every = snapshot_every;
    }
    if (steady_tol > 0.0) {
      cfg.steady_tol = steady_tol;
    }
    if (solver_tol > 0.0) {
      cfg.solver_tol = solver_tol;
    }
    cfg.serial = cfg.serial || serial;  // execution is single-threaded either way
    if (!formats.empty()) {
      cfg.write_vtk = false;
      cfg.write_csv = false;
      for (const std::string& f : formats) {
        cfg.write_vtk |= f == "vtk";
        cfg.write_csv |= f == "csv";
      }
    }
    cfg.params.validate();

    if (run->parsed()) {
      return run_experiment(std::move(cfg));
    }
    return run_accuracy(cfg, levels, n0);
  } catch (const bionet::SimulationError& e) {
    std::fprintf(stderr, "error at step %d: %s\n", e.step_index, e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
