#include "spinpair/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace spinpair {

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.pass; });
}

namespace {

std::string format_dev(double dev, double tol) {
  std::ostringstream out;
  out.precision(3);
  out << "worst " << dev << " against tolerance " << tol;
  return out.str();
}

// Tracks the worst deviation seen and where it happened.
struct Worst {
  double dev = 0.0;
  int trial = -1;
  std::string where;

  void update(double d, int trial_index, std::string location) {
    if (d > dev) {
      dev = d;
      trial = trial_index;
      where = std::move(location);
    }
  }

  VerifyCheck finish(std::string name, double tol, const char* unit = "") const {
    VerifyCheck check;
    check.name = std::move(name);
    check.pass = dev <= tol;
    std::ostringstream detail;
    detail.precision(3);
    detail << format_dev(dev, tol) << unit;
    if (!where.empty()) detail << " at " << where << " (trial " << trial << ")";
    check.detail = detail.str();
    return check;
  }
};

std::string entry_name(int i, int j) {
  return "(" + kObservableLabels[i] + " row, " + kObservableLabels[j] + " column)";
}

PhysicalParams draw_params(int trial, std::mt19937_64& rng) {
  const double two_pi = 2.0 * std::numbers::pi;
  PhysicalParams p;
  p.m0 = 1.0;
  if (trial == 0) {  // locking reference point
    p.omega1 = two_pi * 2000.0;
    p.omega_d = two_pi * 5000.0;
    p.tau_c = 1e-6;
    return p;
  }
  if (trial == 1) {  // undriven edge
    p.omega1 = 0.0;
    p.omega_d = two_pi * 5000.0;
    p.tau_c = 1e-6;
    return p;
  }
  if (trial == 2) {  // uncoupled edge
    p.omega1 = two_pi * 2000.0;
    p.omega_d = 0.0;
    p.tau_c = 1e-6;
    return p;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = std::log(5e-7), log_hi = std::log(1e-5);
  p.tau_c = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
  // Keep omega * tau_c < 0.1 and the absolute scale bounded so closed-form
  // zeros stay resolvable above roundoff.
  const double cap = std::min(0.09 / p.tau_c, 3e4);
  p.omega1 = cap * unit(rng);
  p.omega_d = cap * unit(rng) * (unit(rng) < 0.5 ? 1.0 : -1.0);
  return p;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& opts) {
  if (opts.trials < 1) {
    throw std::invalid_argument("verification needs at least one trial");
  }
  if (opts.inject_flip) {
    const auto [r, c] = *opts.inject_flip;
    if (r < 0 || r >= 9 || c < 0 || c >= 9) {
      throw std::invalid_argument("inject_flip indices must lie in [0, 9)");
    }
  }

  std::mt19937_64 rng(opts.seed);
  const TwoSpinBasis& basis = TwoSpinBasis::standard();

  constexpr double kMatchTol = 1e-10;    // relative, projection vs closed form
  constexpr double kStructTol = 1e-10;   // scaled, structural zeros
  constexpr double kSteadyRel = 1e-10;   // nullspace vs closed form, relative
  constexpr double kSteadyAbs = 1e-12;   // ... absolute floor in units of m0
  constexpr double kEngineTol = 1e-8;    // density vs observable engines

  Worst match9, match3, structure, kernel, spectrum, steady;

  for (int trial = 0; trial < opts.trials; ++trial) {
    const PhysicalParams p = draw_params(trial, rng);

    const CoefficientMatrix9 projected =
        project_generator(build_liouvillian(p), basis);
    Matrix9 closed = analytic_coefficients9(p).matrix;
    if (opts.inject_flip) {
      closed(opts.inject_flip->first, opts.inject_flip->second) *= -1.0;
    }

    const double scale9 = std::max(closed.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index wr = 0, wc = 0;
    const double dev9 =
        (projected.matrix - closed).cwiseAbs().maxCoeff(&wr, &wc) / scale9;
    match9.update(dev9, trial, entry_name(static_cast<int>(wr), static_cast<int>(wc)));

    const Eigen::Matrix3d reduced = reduce_to_locked(projected).matrix;
    const Eigen::Matrix3d closed3 = analytic_coefficients3(p);
    const double scale3 = std::max(closed3.cwiseAbs().maxCoeff(), 1e-300);
    match3.update((reduced - closed3).cwiseAbs().maxCoeff() / scale3, trial, "");

    // Mxx must be conserved and d(Mzz)/dt = -d(Myy)/dt row by row.
    const Matrix9& a = projected.matrix;
    structure.update(a.row(oMxx).cwiseAbs().maxCoeff() / scale9, trial, "Mxx row");
    structure.update((a.row(oMzz) + a.row(oMyy)).cwiseAbs().maxCoeff() / scale9,
                     trial, "Mzz + Myy rows");

    if (p.omega1 != 0.0) {
      const Eigen::RowVector3d left(1.0, 3.0 * p.omega_d / (2.0 * p.omega1), 0.0);
      const double knorm = (left * reduced).cwiseAbs().maxCoeff() /
                           (left.cwiseAbs().maxCoeff() * scale3);
      kernel.update(knorm, trial, "");

      const SteadyState ss =
          steady_state_nullspace(CoefficientMatrix3{reduced, p}, InitialCondition{1.0});
      const double mx_closed = steady_state_mx(p);
      const double allowed =
          kSteadyAbs + kSteadyRel * std::abs(mx_closed);
      steady.update(std::abs(ss.mx_ss - mx_closed) / allowed, trial, "");
    }

    const Eigen::VectorXcd eigs = a.eigenvalues();
    spectrum.update(eigs.real().maxCoeff() / scale9, trial, "");
  }

  VerifyReport report;
  report.trials = opts.trials;
  report.checks.push_back(
      match9.finish("projected 9x9 generator matches closed form", kMatchTol));
  report.checks.push_back(
      match3.finish("locked-sector reduction matches closed form", kMatchTol));
  report.checks.push_back(
      structure.finish("Mxx conserved and Mzz/Myy rows cancel", kStructTol));
  report.checks.push_back(
      kernel.finish("locking combination is conserved by the reduced flow",
                    kStructTol));
  report.checks.push_back(
      spectrum.finish("generator spectrum confined to Re <= 0", kStructTol));
  report.checks.push_back(
      steady.finish("nullspace steady state matches closed form", 1.0,
                    " (deviation in units of the 1e-12 + 1e-10|mx| band)"));

  {  // engines must agree on the same trajectory
    PhysicalParams p;
    p.omega1 = 2.0 * std::numbers::pi * 2000.0;
    p.omega_d = 2.0 * std::numbers::pi * 5000.0;
    p.tau_c = 1e-6;
    StepControl step;
    step.dt = 1e-6;
    step.sample_spacing = 1e-4;
    const double t_end = 2e-3;
    const Trajectory dens =
        integrate(Engine::density, p, InitialCondition{1.0}, t_end, step);
    const Trajectory obs =
        integrate(Engine::observable9, p, InitialCondition{1.0}, t_end, step);
    const double dev = (dens.values - obs.values).cwiseAbs().maxCoeff();
    Worst engines;
    engines.update(dev, -1, "");
    report.checks.push_back(
        engines.finish("density and observable engines agree", kEngineTol));
  }

  return report;
}

}  // namespace spinpair
