#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bionet/accuracy.hpp"
#include "bionet/model.hpp"

namespace bionet {

/// Resolved experiment description: a named preset or a custom parameter
/// set, plus output controls.
struct ExperimentConfig {
  std::string name = "custom";
  ModelParams params;
  std::filesystem::path out_dir;
  int snapshot_every = 100;  // 0 disables intermediate snapshots
  bool write_vtk = true;
  bool write_csv = true;
  double steady_tol = 1e-8;
  double solver_tol = 1e-10;
  bool serial = false;
};

/// Names of the built-in parameter sets (Test-A1..A3, Test-Al1..Al2,
/// Test-DD1..DD3, Test-r1..r2).
const std::vector<std::string>& preset_names();

/// Resolves a preset name or a flat key=value config file. Presets default
/// to sigma = 500, x0 = (0.25, 0.25), n_div = 600, dt = 0.01; a config file
/// without a `preset` key must define all seven model constants.
ExperimentConfig load_config(const std::string& name_or_path);

/// Legacy ASCII VTK unstructured-grid snapshot with point data arrays
/// pressure, c11, c12, c22, c_norm. Deterministic byte-for-byte for equal
/// inputs.
void write_fields_vtk(const TriMesh& mesh, const SimState& state,
                      const std::filesystem::path& path);

/// CSV with header time,energy,increment_norm, one row per record, printed
/// with enough digits to round-trip bitwise. Throws on empty input.
void write_energy_csv(const std::vector<SimRecord>& records,
                      const std::filesystem::path& path);

/// CSV with header h,error,order; the first row has no order entry.
void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::filesystem::path& path);

/// Human-readable accuracy table.
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace bionet
