#pragma once

#include <iosfwd>
#include <optional>

#include "spinpair/verify.hpp"

namespace spinpair {

// Named parameter sets. fig1: no drive, the transverse moment decays away.
// fig2: reference drive omega1 = 2pi*2000 rad/s, the moment locks near
// 0.2215. fig3: scan over four drive amplitudes at the same coupling.
enum class Preset { fig1, fig2, fig3 };

std::string preset_name(Preset preset);
std::optional<Preset> preset_from_name(const std::string& name);

struct RunConfig {
  PhysicalParams params;
  std::vector<double> omega1_grid;  // sweep only; empty = use params.omega1
  Engine engine = Engine::observable9;
  double t_end_s = 0.05;
  StepControl step;
  std::string output_path;  // empty = default name in the output dir
  std::optional<Preset> preset;
  int trials = 100;
};

RunConfig default_config();
void apply_preset(RunConfig& cfg, Preset preset);

// "12345.6" or "<value>*2pi"; throws std::invalid_argument otherwise.
double parse_frequency(const std::string& text);

// Flat "key = value" configuration text ('#' starts a comment). A preset key
// expands immediately; later keys override individual fields, so
// parse(serialize(cfg)) reproduces cfg exactly.
RunConfig parse_config_text(const std::string& text,
                            const RunConfig& base = default_config());
RunConfig load_config_file(const std::string& path,
                           const RunConfig& base = default_config());
std::string serialize_config(const RunConfig& cfg);

// $SPINPAIR_OUT_DIR if set and non-empty, else the working directory. Used
// only when no explicit output path is given.
std::string default_output_dir();
std::string resolve_output_path(const RunConfig& cfg, const std::string& fallback);

// Subcommand bodies. Exit codes: 0 success, 2 unusable configuration,
// 3 integration failure; cmd_verify returns 1 when a check fails.
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, const std::string& matrix_dir,
               std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_steady(const RunConfig& cfg, bool long_time, std::ostream& out,
               std::ostream& err);

}  // namespace spinpair
