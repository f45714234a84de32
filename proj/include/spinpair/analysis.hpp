#pragma once

#include "spinpair/integrator.hpp"

namespace spinpair {

struct SteadyState {
  enum class Source { closed_form, nullspace, long_time };
  double mx_ss = 0.0;
  double w_ss = 0.0;    // Mzz - Myy
  double mzy_ss = 0.0;  // exactly 0 for the nullspace source
  Source source = Source::closed_form;
};

// Locked magnetization m0 * omega1^2 / (omega1^2 + (9/16) omega_d^2). Throws
// DegenerateParams when omega1 = omega_d = 0 (no drive and no coupling leaves
// the locked value undefined).
double steady_state_mx(const PhysicalParams& p);

// Steady state as the kernel of the reduced generator, scaled by matching the
// conserved combination Mx + (3 omega_d / 2 omega1) W against the initial
// state (Mx, W, Mzy) = (m0, 0, 0). Throws RankError if the kernel is not
// one-dimensional and DegenerateParams when omega1 = 0.
SteadyState steady_state_nullspace(const CoefficientMatrix3& system,
                                   const InitialCondition& ic);

// First sampled time after which |Mx - mx_ss| stays below fraction * mx_ss
// for the rest of the trajectory. Returns 0 if that holds from the start.
// Throws NeverLocks if the final sample still violates the band.
double lock_time(const Trajectory& traj, double fraction = 0.05);

struct SweepPoint {
  PhysicalParams params;
  double mx_ss_closed = 0.0;
  double mx_ss_numeric = 0.0;
  double w_ss = 0.0;
  double lock_time_s = 0.0;
  std::string status;  // "ok", "never_locks", "degenerate" or "error: ..."
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double t_end = 0.0;
  StepControl step;
};

// Runs one integration per grid point (in parallel when the grid is large
// enough) and collects closed-form, nullspace and long-time steady-state
// numbers plus the locking time. A failure at one point is recorded in its
// status and does not abort the rest. Duplicate grid points are rejected.
SweepResult sweep(const std::vector<PhysicalParams>& grid, double t_end,
                  const StepControl& step = {});

void write_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::string& path);

}  // namespace spinpair
