#include "bionet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bionet {

namespace {

struct Preset {
  const char* name;
  double alpha, c2, d2, eps, gamma, r, t_final;
};

// Parameter sets of the reference experiments.
constexpr Preset kPresets[] = {
    {"Test-A1", 0.75, 1.0, 1e-1, 1e-1, 1.25, 1e-1, 1.0},
    {"Test-A2", 0.75, 1.0, 1e-1, 1e-1, 0.75, 1e-1, 1.0},
    {"Test-A3", 0.75, 1.0, 1e-4, 1e-1, 0.75, 1e-1, 1.0},
    {"Test-Al1", 1.5, 25.0, 1e-3, 1e-3, 0.75, 1e-3, 10.0},
    {"Test-Al2", 1.5, 25.0, 5e-4, 1e-3, 0.75, 1e-3, 10.0},
    {"Test-DD1", 0.75, 25.0, 2e-3, 1e-3, 0.75, 1e-3, 10.0},
    {"Test-DD2", 0.75, 25.0, 1e-3, 1e-3, 0.75, 1e-3, 10.0},
    {"Test-DD3", 0.75, 25.0, 5e-4, 1e-3, 0.75, 1e-3, 10.0},
    {"Test-r1", 0.75, 25.0, 1e-3, 1e-3, 0.75, 1e-1, 10.0},
    {"Test-r2", 0.75, 25.0, 1e-3, 1e-3, 0.75, 1e-2, 10.0},
};

const Preset* find_preset(const std::string& name) {
  for (const Preset& p : kPresets) {
    if (name == p.name) {
      return &p;
    }
  }
  return nullptr;
}

ExperimentConfig config_from_preset(const Preset& p) {
  ExperimentConfig cfg;
  cfg.name = p.name;
  cfg.params.alpha = p.alpha;
  cfg.params.c2 = p.c2;
  cfg.params.d2 = p.d2;
  cfg.params.eps = p.eps;
  cfg.params.gamma = p.gamma;
  cfg.params.r = p.r;
  cfg.params.t_final = p.t_final;
  cfg.params.sigma = 500.0;
  cfg.params.x0 = {0.25, 0.25};
  cfg.params.n_div = 600;
  cfg.params.dt = 0.01;
  return cfg;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return {};
  }
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size()) {
    throw std::invalid_argument("load_config: invalid number for '" + key +
                                "': " + value);
  }
  return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  int parsed = 0;
  try {
    parsed = std::stoi(value, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != value.size()) {
    throw std::invalid_argument("load_config: invalid integer for '" + key +
                                "': " + value);
  }
  return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") {
    return true;
  }
  if (value == "false" || value == "0") {
    return false;
  }
  throw std::invalid_argument("load_config: invalid boolean for '" + key +
                              "': " + value);
}

ExperimentConfig config_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("load_config: cannot open " + path.string());
  }
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("load_config: " + path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": expected key=value");
    }
    entries[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }

  ExperimentConfig cfg;
  if (auto it = entries.find("preset"); it != entries.end()) {
    const Preset* p = find_preset(it->second);
    if (!p) {
      throw std::invalid_argument("load_config: unknown preset '" +
                                  it->second + "'");
    }
    cfg = config_from_preset(*p);
    entries.erase(it);
  } else {
    cfg.name = "custom";
    static const char* required[] = {"alpha", "c2", "d2",     "eps",
                                     "gamma", "r",  "t_final"};
    for (const char* key : required) {
      if (entries.find(key) == entries.end()) {
        throw std::invalid_argument(
            "load_config: custom config is missing required field '" +
            std::string(key) + "'");
      }
    }
  }

  for (const auto& [key, value] : entries) {
    if (key == "name") {
      cfg.name = value;
    } else if (key == "alpha") {
      cfg.params.alpha = parse_double(key, value);
    } else if (key == "c2") {
      cfg.params.c2 = parse_double(key, value);
    } else if (key == "d2") {
      cfg.params.d2 = parse_double(key, value);
    } else if (key == "eps") {
      cfg.params.eps = parse_double(key, value);
    } else if (key == "gamma") {
      cfg.params.gamma = parse_double(key, value);
    } else if (key == "r") {
      cfg.params.r = parse_double(key, value);
    } else if (key == "t_final") {
      cfg.params.t_final = parse_double(key, value);
    } else if (key == "sigma") {
      cfg.params.sigma = parse_double(key, value);
    } else if (key == "x0_x") {
      cfg.params.x0[0] = parse_double(key, value);
    } else if (key == "x0_y") {
      cfg.params.x0[1] = parse_double(key, value);
    } else if (key == "dt") {
      cfg.params.dt = parse_double(key, value);
    } else if (key == "n_div") {
      cfg.params.n_div = parse_int(key, value);
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "snapshot_every") {
      cfg.snapshot_every = parse_int(key, value);
    } else if (key == "steady_tol") {
      cfg.steady_tol = parse_double(key, value);
    } else if (key == "solver_tol") {
      cfg.solver_tol = parse_double(key, value);
    } else if (key == "serial") {
      cfg.serial = parse_bool(key, value);
    } else if (key == "formats") {
      cfg.write_vtk = value.find("vtk") != std::string::npos;
      cfg.write_csv = value.find("csv") != std::string::npos;
      if (!cfg.write_vtk && !cfg.write_csv) {
        throw std::invalid_argument(
            "load_config: formats must include vtk and/or csv");
      }
    } else {
      throw std::invalid_argument("load_config: unknown key '" + key + "'");
    }
  }
  cfg.params.validate();
  return cfg;
}

void format_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("write to " + path.string() + " failed");
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Preset& p : kPresets) {
      v.push_back(p.name);
    }
    return v;
  }();
  return names;
}

ExperimentConfig load_config(const std::string& name_or_path) {
  if (const Preset* p = find_preset(name_or_path)) {
    return config_from_preset(*p);
  }
  if (std::filesystem::exists(name_or_path)) {
    return config_from_file(name_or_path);
  }
  std::ostringstream msg;
  msg << "load_config: '" << name_or_path
      << "' is neither a config file nor a known preset (presets:";
  for (const std::string& name : preset_names()) {
    msg << ' ' << name;
  }
  msg << ')';
  throw std::invalid_argument(msg.str());
}

void write_fields_vtk(const TriMesh& mesh, const SimState& state,
                      const std::filesystem::path& path) {
  const ScalarField c_norm = frobenius_norm_field(state.conductivity);
  std::string out;
  out.reserve(64 * static_cast<std::size_t>(mesh.node_count()));

  out += "# vtk DataFile Version 3.0\n";
  out += "bionet fields step=" + std::to_string(state.step_index) + " time=";
  format_double(out, state.time);
  out += "\nASCII\nDATASET UNSTRUCTURED_GRID\n";

  out += "POINTS " + std::to_string(mesh.node_count()) + " double\n";
  for (int k = 0; k < mesh.node_count(); ++k) {
    format_double(out, mesh.nodes(k, 0));
    out += ' ';
    format_double(out, mesh.nodes(k, 1));
    out += " 0\n";
  }

  out += "CELLS " + std::to_string(mesh.element_count()) + ' ' +
         std::to_string(4 * mesh.element_count()) + '\n';
  for (int e = 0; e < mesh.element_count(); ++e) {
    out += "3 " + std::to_string(mesh.elements(e, 0)) + ' ' +
           std::to_string(mesh.elements(e, 1)) + ' ' +
           std::to_string(mesh.elements(e, 2)) + '\n';
  }
  out += "CELL_TYPES " + std::to_string(mesh.element_count()) + '\n';
  for (int e = 0; e < mesh.element_count(); ++e) {
    out += "5\n";
  }

  out += "POINT_DATA " + std::to_string(mesh.node_count()) + '\n';
  const std::pair<const char*, const Eigen::VectorXd*> arrays[] = {
      {"pressure", &state.pressure},
      {"c11", &state.conductivity.c11},
      {"c12", &state.conductivity.c12},
      {"c22", &state.conductivity.c22},
      {"c_norm", &c_norm},
  };
  for (const auto& [name, values] : arrays) {
    out += "SCALARS " + std::string(name) + " double 1\n";
    out += "LOOKUP_TABLE default\n";
    for (Eigen::Index k = 0; k < values->size(); ++k) {
      format_double(out, (*values)[k]);
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void write_energy_csv(const std::vector<SimRecord>& records,
                      const std::filesystem::path& path) {
  if (records.empty()) {
    throw std::invalid_argument("write_energy_csv: no records");
  }
  std::string out = "time,energy,increment_norm\n";
  for (const SimRecord& rec : records) {
    format_double(out, rec.time);
    out += ',';
    format_double(out, rec.energy);
    out += ',';
    format_double(out, rec.increment_norm);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::filesystem::path& path) {
  std::string out = "h,error,order\n";
  for (const ConvergenceRow& row : rows) {
    format_double(out, row.h);
    out += ',';
    format_double(out, row.error);
    out += ',';
    if (!std::isnan(row.order)) {
      format_double(out, row.order);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "        h        error    order\n";
  for (const ConvergenceRow& row : rows) {
    char line[96];
    if (std::isnan(row.order)) {
      std::snprintf(line, sizeof(line), "%9.6f  %11.7g       --\n", row.h,
                    row.error);
    } else {
      std::snprintf(line, sizeof(line), "%9.6f  %11.7g   %6.3f\n", row.h,
                    row.error, row.order);
    }
    out << line;
  }
  return out.str();
}

}  // namespace bionet
