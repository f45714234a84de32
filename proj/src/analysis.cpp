#include "spinpair/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace spinpair {

double steady_state_mx(const PhysicalParams& p) {
  p.validate();
  if (p.omega1 == 0.0 && p.omega_d == 0.0) {
    throw DegenerateParams(
        "steady state undefined for omega1 = omega_d = 0 (nothing locks)");
  }
  const double w1sq = p.omega1 * p.omega1;
  const double wdsq = p.omega_d * p.omega_d;
  return p.m0 * w1sq / (w1sq + 9.0 / 16.0 * wdsq);
}

SteadyState steady_state_nullspace(const CoefficientMatrix3& system,
                                   const InitialCondition& ic) {
  const PhysicalParams& p = system.params;
  p.validate();
  if (p.omega1 == 0.0) {
    throw DegenerateParams(
        "nullspace steady state needs a drive (omega1 = 0 never locks)");
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(system.matrix, Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();
  const double rank_tol = 1e-10 * sigma(0);
  int null_dim = 0;
  for (int i = 0; i < 3; ++i) {
    if (sigma(i) <= rank_tol) ++null_dim;
  }
  if (null_dim != 1) {
    std::ostringstream msg;
    msg << "reduced generator has a " << null_dim
        << "-dimensional kernel (singular values " << sigma(0) << ", " << sigma(1)
        << ", " << sigma(2) << "); expected exactly one steady direction";
    throw RankError(msg.str());
  }

  Eigen::Vector3d u = svd.matrixV().col(2);
  if (std::abs(u(0)) < 1e-12) {
    throw RankError("steady direction has no Mx component; cannot scale it");
  }
  u /= u(0);

  // The left kernel vector (1, 3 omega_d / 2 omega1, 0) is conserved by the
  // flow, which fixes the scale from the initial state (m0, 0, 0).
  const double ratio = 3.0 * p.omega_d / (2.0 * p.omega1);
  const double alpha = ic.m0 / (1.0 + ratio * u(1));

  SteadyState ss;
  ss.source = SteadyState::Source::nullspace;
  ss.mx_ss = alpha;
  ss.w_ss = alpha * u(1);
  const double mzy = alpha * u(2);
  if (std::abs(mzy) > 1e-10 * std::max(std::abs(alpha), 1e-300)) {
    std::ostringstream msg;
    msg << "steady direction has Mzy component " << mzy
        << "; kernel does not match the locked structure";
    throw RankError(msg.str());
  }
  ss.mzy_ss = 0.0;
  return ss;
}

double lock_time(const Trajectory& traj, double fraction) {
  if (!(fraction > 0.0)) {
    throw std::invalid_argument("fraction must be positive");
  }
  const double target = steady_state_mx(traj.params);
  const double band = fraction * std::abs(target);
  const int mx = traj.column("Mx");

  const long n = static_cast<long>(traj.times.size());
  long last_violation = -1;
  for (long i = 0; i < n; ++i) {
    if (std::abs(traj.values(i, mx) - target) >= band) last_violation = i;
  }
  if (last_violation < 0) return 0.0;
  if (last_violation == n - 1) {
    std::ostringstream msg;
    msg << "trajectory never settles into the " << fraction * 100.0
        << "% band around mx_ss = " << target << " within "
        << traj.times.back() << " s";
    throw NeverLocks(msg.str());
  }
  return traj.times[last_violation + 1];
}

namespace {

void fill_point(SweepPoint& point, double t_end, const StepControl& step) {
  const PhysicalParams& p = point.params;
  try {
    p.validate();
    point.mx_ss_closed = steady_state_mx(p);
    if (p.omega1 != 0.0) {
      const SteadyState ss = steady_state_nullspace(
          reduce_to_locked(analytic_coefficients9(p)), InitialCondition{p.m0});
      point.w_ss = ss.w_ss;
    } else {
      point.w_ss = 0.0;
    }
    const Trajectory traj =
        integrate(Engine::observable9, p, InitialCondition{p.m0}, t_end, step);
    point.mx_ss_numeric = traj.final_values()(traj.column("Mx"));
    point.lock_time_s = lock_time(traj);
    point.status = "ok";
  } catch (const NeverLocks&) {
    point.lock_time_s = std::nan("");
    point.status = "never_locks";
  } catch (const DegenerateParams&) {
    point.mx_ss_closed = std::nan("");
    point.mx_ss_numeric = std::nan("");
    point.w_ss = std::nan("");
    point.lock_time_s = std::nan("");
    point.status = "degenerate";
  } catch (const std::exception& e) {
    point.mx_ss_closed = std::nan("");
    point.mx_ss_numeric = std::nan("");
    point.w_ss = std::nan("");
    point.lock_time_s = std::nan("");
    point.status = std::string("error: ") + e.what();
  }
}

}  // namespace

SweepResult sweep(const std::vector<PhysicalParams>& grid, double t_end,
                  const StepControl& step) {
  for (size_t i = 0; i < grid.size(); ++i) {
    for (size_t j = i + 1; j < grid.size(); ++j) {
      if (grid[i].omega1 == grid[j].omega1 && grid[i].omega_d == grid[j].omega_d &&
          grid[i].tau_c == grid[j].tau_c && grid[i].m0 == grid[j].m0) {
        std::ostringstream msg;
        msg << "sweep grid points " << i << " and " << j << " are identical";
        throw std::invalid_argument(msg.str());
      }
    }
  }

  SweepResult result;
  result.t_end = t_end;
  result.step = step;
  result.points.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) result.points[i].params = grid[i];

  const size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t workers = std::min<size_t>(hw, grid.size());
  if (workers <= 1) {
    for (auto& point : result.points) fill_point(point, t_end, step);
    return result;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < result.points.size(); i += workers) {
        fill_point(result.points[i], t_end, step);
      }
    });
  }
  for (auto& t : pool) t.join();
  return result;
}

namespace {

void append_sweep_value(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  line += buf;
  line += ',';
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "omega1_rad_s,omega_d_rad_s,tau_c_s,mx_ss_closed,mx_ss_numeric,w_ss,"
         "lock_time_s,status\n";
  for (const auto& point : result.points) {
    std::string line;
    append_sweep_value(line, point.params.omega1);
    append_sweep_value(line, point.params.omega_d);
    append_sweep_value(line, point.params.tau_c);
    append_sweep_value(line, point.mx_ss_closed);
    append_sweep_value(line, point.mx_ss_numeric);
    append_sweep_value(line, point.w_ss);
    append_sweep_value(line, point.lock_time_s);
    line += point.status;
    line += '\n';
    out << line;
  }
}

void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  write_csv(result, out);
  if (!out.good()) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

}  // namespace spinpair
