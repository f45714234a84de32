#include "spinpair/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace spinpair {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  char* end = nullptr;
  const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("cannot parse " + what + " from '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument(what + " must be an integer, got '" + text + "'");
  }
  return i;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string s = trim(text);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("cannot parse " + what + " from '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type from = 0;
  while (true) {
    const auto at = s.find(sep, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

std::string format_full(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string format_short(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::fig1:
      return "fig1";
    case Preset::fig2:
      return "fig2";
    case Preset::fig3:
      return "fig3";
  }
  return "unknown";
}

std::optional<Preset> preset_from_name(const std::string& name) {
  if (name == "fig1") return Preset::fig1;
  if (name == "fig2") return Preset::fig2;
  if (name == "fig3") return Preset::fig3;
  return std::nullopt;
}

RunConfig default_config() { return RunConfig{}; }

void apply_preset(RunConfig& cfg, Preset preset) {
  const double two_pi = 2.0 * std::numbers::pi;
  cfg.preset = preset;
  cfg.params = PhysicalParams{};
  cfg.params.omega_d = two_pi * 5000.0;
  cfg.params.tau_c = 1e-6;
  cfg.params.m0 = 1.0;
  cfg.engine = Engine::observable9;
  cfg.t_end_s = 0.05;
  cfg.step = StepControl{};
  cfg.omega1_grid.clear();
  switch (preset) {
    case Preset::fig1:
      cfg.params.omega1 = 0.0;
      break;
    case Preset::fig2:
      cfg.params.omega1 = two_pi * 2000.0;
      break;
    case Preset::fig3:
      // Drive-amplitude scan bracketing the fig2 value; the exact legend is a
      // documented project choice, not an authoritative set.
      cfg.params.omega1 = two_pi * 500.0;
      cfg.omega1_grid = {two_pi * 500.0, two_pi * 1000.0, two_pi * 2000.0,
                         two_pi * 4000.0};
      break;
  }
}

double parse_frequency(const std::string& text) {
  std::string s = trim(text);
  double factor = 1.0;
  if (s.size() >= 4 && s.compare(s.size() - 4, 4, "*2pi") == 0) {
    factor = 2.0 * std::numbers::pi;
    s = trim(s.substr(0, s.size() - 4));
  }
  return factor * parse_double(s, "frequency");
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  if (cfg.preset) out << "preset = " << preset_name(*cfg.preset) << "\n";
  out << "omega1 = " << format_full(cfg.params.omega1) << "\n";
  out << "omega_d = " << format_full(cfg.params.omega_d) << "\n";
  out << "tau_c = " << format_full(cfg.params.tau_c) << "\n";
  out << "m0 = " << format_full(cfg.params.m0) << "\n";
  out << "delta_omega = " << format_full(cfg.params.delta_omega) << "\n";
  out << "omega0 = " << format_full(cfg.params.omega0) << "\n";
  out << "engine = " << engine_name(cfg.engine) << "\n";
  out << "t_end = " << format_full(cfg.t_end_s) << "\n";
  out << "adaptive = " << (cfg.step.adaptive ? "true" : "false") << "\n";
  out << "dt = " << format_full(cfg.step.dt) << "\n";
  out << "rel_tol = " << format_full(cfg.step.rel_tol) << "\n";
  out << "sample_spacing = " << format_full(cfg.step.sample_spacing) << "\n";
  out << "trials = " << cfg.trials << "\n";
  if (!cfg.omega1_grid.empty()) {
    out << "omega1_grid = ";
    for (size_t i = 0; i < cfg.omega1_grid.size(); ++i) {
      if (i) out << ",";
      out << format_full(cfg.omega1_grid[i]);
    }
    out << "\n";
  }
  if (!cfg.output_path.empty()) out << "out = " << cfg.output_path << "\n";
  return out.str();
}

RunConfig parse_config_text(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "configuration line " << line_no << " is not 'key = value': " << line;
      throw std::invalid_argument(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "preset") {
      const auto p = preset_from_name(value);
      if (!p) throw std::invalid_argument("unknown preset '" + value + "'");
      apply_preset(cfg, *p);
    } else if (key == "omega1") {
      cfg.params.omega1 = parse_frequency(value);
    } else if (key == "omega_d") {
      cfg.params.omega_d = parse_frequency(value);
    } else if (key == "tau_c") {
      cfg.params.tau_c = parse_double(value, key);
    } else if (key == "m0") {
      cfg.params.m0 = parse_double(value, key);
    } else if (key == "delta_omega") {
      cfg.params.delta_omega = parse_frequency(value);
    } else if (key == "omega0") {
      cfg.params.omega0 = parse_frequency(value);
    } else if (key == "engine") {
      cfg.engine = engine_from_name(value);
    } else if (key == "t_end") {
      cfg.t_end_s = parse_double(value, key);
    } else if (key == "adaptive") {
      cfg.step.adaptive = parse_bool(value, key);
    } else if (key == "dt") {
      cfg.step.dt = parse_double(value, key);
    } else if (key == "rel_tol") {
      cfg.step.rel_tol = parse_double(value, key);
    } else if (key == "sample_spacing") {
      cfg.step.sample_spacing = parse_double(value, key);
    } else if (key == "trials") {
      cfg.trials = parse_int(value, key);
    } else if (key == "omega1_grid") {
      cfg.omega1_grid.clear();
      for (const auto& part : split(value, ',')) {
        cfg.omega1_grid.push_back(parse_frequency(part));
      }
    } else if (key == "out") {
      cfg.output_path = value;
    } else {
      throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open configuration file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), base);
}

std::string default_output_dir() {
  const char* dir = std::getenv("SPINPAIR_OUT_DIR");
  if (dir != nullptr && dir[0] != '\0') return dir;
  return ".";
}

std::string resolve_output_path(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.output_path.empty()) return cfg.output_path;
  const std::string dir = default_output_dir();
  std::filesystem::create_directories(dir);
  return dir + "/" + fallback;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.params.validate();
    if (!(cfg.t_end_s > 0.0)) {
      throw std::invalid_argument("t_end must be positive");
    }
    if (cfg.preset == Preset::fig3 || cfg.omega1_grid.size() > 1) {
      throw std::invalid_argument(
          "this configuration holds an omega1 grid; use the sweep command");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& warning : validate_regime(cfg.params)) {
    err << "warning: " << warning << "\n";
  }

  Trajectory traj;
  try {
    traj = integrate(cfg.engine, cfg.params, InitialCondition{cfg.params.m0},
                     cfg.t_end_s, cfg.step);
  } catch (const UnsupportedOffResonance& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidM0& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const SimulationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  const std::string path = resolve_output_path(cfg, "trajectory.csv");
  try {
    write_csv(traj, path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  out << "wrote " << path << " (" << traj.values.rows() << " samples, engine "
      << engine_name(traj.engine) << ")\n";
  out << "final t = " << format_short(traj.times.back()) << " s:";
  const Eigen::VectorXd last = traj.final_values();
  for (size_t c = 0; c < traj.labels.size(); ++c) {
    out << " " << traj.labels[c] << " = " << format_short(last(c));
  }
  out << "\n";
  return 0;
}

int cmd_verify(const VerifyOptions& opts, const std::string& matrix_dir,
               std::ostream& out, std::ostream& err) {
  VerifyReport report;
  try {
    report = run_verification(opts);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  size_t width = 0;
  for (const auto& check : report.checks) width = std::max(width, check.name.size());
  out << "verification over " << report.trials << " parameter draws:\n";
  for (const auto& check : report.checks) {
    out << "  " << std::left << std::setw(static_cast<int>(width) + 2)
        << check.name << (check.pass ? "PASS" : "FAIL") << "  " << check.detail
        << "\n";
  }
  out << (report.all_pass() ? "all checks passed" : "verification FAILED") << "\n";

  if (!matrix_dir.empty()) {
    try {
      std::filesystem::create_directories(matrix_dir);
      PhysicalParams p;
      p.omega1 = 2.0 * std::numbers::pi * 2000.0;
      p.omega_d = 2.0 * std::numbers::pi * 5000.0;
      p.tau_c = 1e-6;
      const CoefficientMatrix9 closed = analytic_coefficients9(p);
      const CoefficientMatrix9 projected =
          project_generator(build_liouvillian(p), TwoSpinBasis::standard());
      std::ofstream(matrix_dir + "/coefficients9_closed.txt")
          << to_text(closed.matrix);
      std::ofstream(matrix_dir + "/coefficients9_projected.txt")
          << to_text(projected.matrix);
      std::ofstream(matrix_dir + "/coefficients3_closed.txt")
          << to_text(analytic_coefficients3(p));
      out << "wrote reference matrices to " << matrix_dir << "\n";
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return report.all_pass() ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<PhysicalParams> grid;
  try {
    cfg.params.validate();
    if (!(cfg.t_end_s > 0.0)) {
      throw std::invalid_argument("t_end must be positive");
    }
    const std::vector<double> omega1s =
        cfg.omega1_grid.empty() ? std::vector<double>{cfg.params.omega1}
                                : cfg.omega1_grid;
    for (double w1 : omega1s) {
      PhysicalParams p = cfg.params;
      p.omega1 = w1;
      grid.push_back(p);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& p : grid) {
    for (const auto& warning : validate_regime(p)) {
      err << "warning: " << warning << "\n";
    }
  }

  SweepResult result;
  try {
    result = sweep(grid, cfg.t_end_s, cfg.step);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string path = resolve_output_path(cfg, "sweep.csv");
  try {
    write_csv(result, path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  out << "wrote " << path << " (" << result.points.size() << " points)\n";
  out << "omega1_rad_s  mx_ss_closed  mx_ss_numeric  lock_time_s  status\n";
  for (const auto& point : result.points) {
    out << format_short(point.params.omega1) << "  "
        << format_short(point.mx_ss_closed) << "  "
        << format_short(point.mx_ss_numeric) << "  "
        << format_short(point.lock_time_s) << "  " << point.status << "\n";
  }
  return 0;
}

int cmd_steady(const RunConfig& cfg, bool long_time, std::ostream& out,
               std::ostream& err) {
  double closed = 0.0;
  try {
    cfg.params.validate();
    closed = steady_state_mx(cfg.params);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  out << "steady-state Mx for m0 = " << format_short(cfg.params.m0) << ":\n";
  out << "  closed form  " << format_full(closed) << "\n";

  if (cfg.params.omega1 != 0.0) {
    try {
      const SteadyState ss = steady_state_nullspace(
          reduce_to_locked(analytic_coefficients9(cfg.params)),
          InitialCondition{cfg.params.m0});
      const double denom = std::max(std::abs(closed), 1e-300);
      out << "  nullspace    " << format_full(ss.mx_ss) << "  (rel diff "
          << format_short(std::abs(ss.mx_ss - closed) / denom) << ", W = "
          << format_full(ss.w_ss) << ")\n";
    } catch (const SimulationError& e) {
      err << "error: " << e.what() << "\n";
      return 3;
    }
  } else {
    out << "  nullspace    n/a (no drive, nothing locks)\n";
  }

  if (long_time) {
    try {
      const Trajectory traj =
          integrate(Engine::observable9, cfg.params,
                    InitialCondition{cfg.params.m0}, cfg.t_end_s, cfg.step);
      const double mx = traj.final_values()(traj.column("Mx"));
      std::ostringstream diff;
      if (closed != 0.0) {
        diff << "rel diff " << format_short(std::abs(mx - closed) / std::abs(closed));
      } else {
        diff << "abs diff " << format_short(std::abs(mx));
      }
      out << "  long time    " << format_full(mx) << "  (" << diff.str()
          << " at t = " << format_short(traj.times.back()) << " s)\n";
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 3;
    }
  }
  return 0;
}

}  // namespace spinpair
