#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spinpair/cli.hpp"

namespace {

using spinpair::RunConfig;

struct CommonFlags {
  std::string config, preset, omega1, omega_d, engine, out;
  double tau_c = 0.0, m0 = 0.0, t_end = 0.0, dt = 0.0, rel_tol = 0.0,
         sample_spacing = 0.0;
  bool adaptive = false;

  CLI::Option* config_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
  CLI::Option* omega1_opt = nullptr;
  CLI::Option* omega_d_opt = nullptr;
  CLI::Option* tau_c_opt = nullptr;
  CLI::Option* m0_opt = nullptr;
  CLI::Option* t_end_opt = nullptr;
  CLI::Option* dt_opt = nullptr;
  CLI::Option* adaptive_opt = nullptr;
  CLI::Option* rel_tol_opt = nullptr;
  CLI::Option* sample_spacing_opt = nullptr;
  CLI::Option* engine_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f, bool grid_ok) {
  f.config_opt = sub->add_option("--config", f.config, "key = value configuration file");
  f.preset_opt = sub->add_option("--preset", f.preset, "fig1, fig2 or fig3");
  f.omega1_opt = sub->add_option(
      "--omega1", f.omega1,
      grid_ok ? "drive amplitude(s), rad/s; comma list allowed; *2pi suffix ok"
              : "drive amplitude, rad/s; *2pi suffix ok");
  f.omega_d_opt =
      sub->add_option("--omega-d", f.omega_d, "dipolar coupling, rad/s; *2pi suffix ok");
  f.tau_c_opt = sub->add_option("--tau-c", f.tau_c, "bath correlation time, s");
  f.m0_opt = sub->add_option("--m0", f.m0, "initial moment in (0, 1]");
  f.t_end_opt = sub->add_option("--t-end", f.t_end, "integration span, s");
  f.dt_opt = sub->add_option("--dt", f.dt, "fixed step size, s");
  f.adaptive_opt = sub->add_flag("--adaptive", f.adaptive, "use the adaptive stepper");
  f.rel_tol_opt = sub->add_option("--rel-tol", f.rel_tol, "adaptive relative tolerance");
  f.sample_spacing_opt =
      sub->add_option("--sample-spacing", f.sample_spacing, "output sample interval, s");
  f.engine_opt =
      sub->add_option("--engine", f.engine, "density, observable9 or reduced3");
  f.out_opt = sub->add_option("--out", f.out, "output file path");
}

RunConfig build_config(const CommonFlags& f, bool grid_ok) {
  RunConfig cfg = spinpair::default_config();
  if (f.config_opt->count() > 0) cfg = spinpair::load_config_file(f.config, cfg);
  if (f.preset_opt->count() > 0) {
    const auto preset = spinpair::preset_from_name(f.preset);
    if (!preset) throw std::invalid_argument("unknown preset '" + f.preset + "'");
    spinpair::apply_preset(cfg, *preset);
  }
  if (f.omega1_opt->count() > 0) {
    if (f.omega1.find(',') != std::string::npos) {
      if (!grid_ok) {
        throw std::invalid_argument("an omega1 list is only valid for sweep");
      }
      cfg.omega1_grid.clear();
      std::string rest = f.omega1;
      while (true) {
        const auto at = rest.find(',');
        cfg.omega1_grid.push_back(
            spinpair::parse_frequency(rest.substr(0, at)));
        if (at == std::string::npos) break;
        rest = rest.substr(at + 1);
      }
    } else {
      cfg.params.omega1 = spinpair::parse_frequency(f.omega1);
      cfg.omega1_grid.clear();
    }
  }
  if (f.omega_d_opt->count() > 0) cfg.params.omega_d = spinpair::parse_frequency(f.omega_d);
  if (f.tau_c_opt->count() > 0) cfg.params.tau_c = f.tau_c;
  if (f.m0_opt->count() > 0) cfg.params.m0 = f.m0;
  if (f.t_end_opt->count() > 0) cfg.t_end_s = f.t_end;
  if (f.dt_opt->count() > 0) cfg.step.dt = f.dt;
  if (f.adaptive_opt->count() > 0) cfg.step.adaptive = true;
  if (f.rel_tol_opt->count() > 0) {
    cfg.step.rel_tol = f.rel_tol;
    cfg.step.adaptive = true;
  }
  if (f.sample_spacing_opt->count() > 0) cfg.step.sample_spacing = f.sample_spacing;
  if (f.engine_opt->count() > 0) cfg.engine = spinpair::engine_from_name(f.engine);
  if (f.out_opt->count() > 0) cfg.output_path = f.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dissipative dynamics of a driven dipolar-coupled spin pair"};
  app.require_subcommand(1);

  int rc = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory to CSV");
  auto sim_flags = std::make_shared<CommonFlags>();
  add_common(simulate, *sim_flags, false);
  simulate->callback([sim_flags, &rc] {
    try {
      rc = spinpair::cmd_simulate(build_config(*sim_flags, false), std::cout, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = 2;
    }
  });

  CLI::App* verify = app.add_subcommand("verify", "cross-check generators and invariants");
  auto ver_trials = std::make_shared<int>(100);
  auto ver_seed = std::make_shared<std::uint64_t>(spinpair::VerifyOptions{}.seed);
  auto ver_out = std::make_shared<std::string>();
  auto ver_flip = std::make_shared<std::string>();
  verify->add_option("--trials", *ver_trials, "number of random parameter draws");
  verify->add_option("--seed", *ver_seed, "random draw seed");
  verify->add_option("--out", *ver_out, "directory for reference matrix dumps");
  verify->add_option("--inject-flip", *ver_flip, "row,col sign flip self-test")
      ->group("");
  verify->callback([ver_trials, ver_seed, ver_out, ver_flip, &rc] {
    try {
      spinpair::VerifyOptions opts;
      opts.trials = *ver_trials;
      opts.seed = *ver_seed;
      if (!ver_flip->empty()) {
        const auto at = ver_flip->find(',');
        if (at == std::string::npos) {
          throw std::invalid_argument("--inject-flip expects 'row,col'");
        }
        opts.inject_flip = {std::stoi(ver_flip->substr(0, at)),
                            std::stoi(ver_flip->substr(at + 1))};
      }
      rc = spinpair::cmd_verify(opts, *ver_out, std::cout, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = 2;
    }
  });

  CLI::App* sweep = app.add_subcommand("sweep", "scan drive amplitudes to CSV");
  auto sweep_flags = std::make_shared<CommonFlags>();
  add_common(sweep, *sweep_flags, true);
  sweep->callback([sweep_flags, &rc] {
    try {
      rc = spinpair::cmd_sweep(build_config(*sweep_flags, true), std::cout, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = 2;
    }
  });

  CLI::App* steady = app.add_subcommand("steady", "print steady-state values");
  auto steady_flags = std::make_shared<CommonFlags>();
  auto long_time = std::make_shared<bool>(false);
  add_common(steady, *steady_flags, false);
  steady->add_flag("--long-time", *long_time, "also integrate and report the long-time value");
  steady->callback([steady_flags, long_time, &rc] {
    try {
      rc = spinpair::cmd_steady(build_config(*steady_flags, false), *long_time,
                                std::cout, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = 2;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}
