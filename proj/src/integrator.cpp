#include "spinpair/integrator.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spinpair {

namespace {

void check_m0(double m0) {
  if (!std::isfinite(m0) || !(m0 > 0.0) || m0 > 1.0) {
    std::ostringstream msg;
    msg << "initial moment m0 = " << m0 << " outside (0, 1]";
    throw InvalidM0(msg.str());
  }
}

void append_full(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  line += buf;
}

}  // namespace

std::string engine_name(Engine engine) {
  switch (engine) {
    case Engine::density:
      return "density";
    case Engine::observable9:
      return "observable9";
    case Engine::reduced3:
      return "reduced3";
  }
  return "unknown";
}

Engine engine_from_name(const std::string& name) {
  if (name == "density") return Engine::density;
  if (name == "observable9") return Engine::observable9;
  if (name == "reduced3") return Engine::reduced3;
  throw std::invalid_argument("unknown engine '" + name +
                              "' (expected density, observable9 or reduced3)");
}

DensityState initial_density(const InitialCondition& ic) {
  check_m0(ic.m0);
  const SpinOperators& ops = spin_operators();
  DensityState state;
  state.op = 0.25 * ops.identity + 0.5 * ic.m0 * ops.fx;
  state.time = 0.0;
  return state;
}

int Trajectory::column(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("trajectory has no column '" + label + "'");
}

Eigen::VectorXd Trajectory::final_values() const {
  if (values.rows() == 0) throw std::logic_error("empty trajectory");
  return values.row(values.rows() - 1).transpose();
}

namespace {

struct SampleGrid {
  long samples;   // sample intervals after t = 0
  double spacing; // actual spacing
  long steps;     // fixed-step: steps per sample interval
  double dt;      // fixed-step: actual dt (snapped so steps * dt == spacing)
};

SampleGrid make_grid(double t_end, const StepControl& step) {
  if (!std::isfinite(t_end) || !(t_end > 0.0)) {
    throw std::invalid_argument("t_end must be positive and finite");
  }
  if (!(step.sample_spacing > 0.0)) {
    throw std::invalid_argument("sample_spacing must be positive");
  }
  SampleGrid grid;
  grid.spacing = std::min(step.sample_spacing, t_end);
  grid.samples = std::lround(std::floor(t_end / grid.spacing + 1e-9));
  if (step.adaptive) {
    if (!(step.rel_tol >= 0.0)) {
      throw std::invalid_argument("rel_tol must be non-negative");
    }
    grid.steps = 0;
    grid.dt = 0.0;
  } else {
    if (!(step.dt > 0.0)) {
      throw std::invalid_argument("dt must be positive");
    }
    grid.steps = std::max(1L, std::lround(grid.spacing / step.dt));
    grid.dt = grid.spacing / static_cast<double>(grid.steps);
  }
  return grid;
}

template <typename Mat, typename Vec, typename OnSample>
void drive(const Mat& a, const Vec& y0, const SampleGrid& grid,
           const StepControl& step, OnSample&& on_sample) {
  if (step.adaptive) {
    ode::integrate_adaptive_ck(a, y0, grid.spacing, grid.samples, step.rel_tol,
                               on_sample);
  } else {
    ode::integrate_fixed_rk4(a, y0, grid.dt, grid.steps, grid.samples,
                             on_sample);
  }
}

}  // namespace

Trajectory integrate(Engine engine, const PhysicalParams& params,
                     const InitialCondition& ic, double t_end,
                     const StepControl& step) {
  params.validate();
  check_m0(ic.m0);
  if (params.delta_omega != 0.0) {
    throw UnsupportedOffResonance(
        "integration requires the resonant frame (delta_omega = 0)");
  }
  const SampleGrid grid = make_grid(t_end, step);

  Trajectory traj;
  traj.engine = engine;
  traj.params = params;
  traj.step = step;
  traj.step.sample_spacing = grid.spacing;
  if (!step.adaptive) traj.step.dt = grid.dt;
  traj.times.resize(grid.samples + 1);

  long row = 0;
  if (engine == Engine::density) {
    const Liouvillian l = build_liouvillian(params);
    const TwoSpinBasis& basis = TwoSpinBasis::standard();
    traj.labels.assign(kObservableLabels.begin(), kObservableLabels.end());
    traj.values.resize(grid.samples + 1, 9);
    const SuperVector y0 = vectorize(initial_density(ic).op);
    drive(l.matrix, y0, grid, step, [&](double t, const SuperVector& y) {
      if (!y.allFinite()) {
        throw NonFiniteState("density state became non-finite during integration");
      }
      const Operator rho = unvectorize(y);
      traj.max_trace_dev =
          std::max(traj.max_trace_dev, std::abs(rho.trace() - Complex(1.0)));
      traj.max_herm_dev = std::max(
          traj.max_herm_dev,
          (rho - Operator(rho.adjoint())).cwiseAbs().maxCoeff());
      traj.times[row] = t;
      for (int j = 0; j < 9; ++j) {
        traj.values(row, j) =
            expectation(basis.elements[kObservableBasisIndex[j]], rho);
      }
      ++row;
    });
  } else if (engine == Engine::observable9) {
    const Matrix9 a = analytic_coefficients9(params).matrix;
    traj.labels.assign(kObservableLabels.begin(), kObservableLabels.end());
    traj.values.resize(grid.samples + 1, 9);
    Vector9 y0 = Vector9::Zero();
    y0(oMx) = ic.m0;
    drive(a, y0, grid, step, [&](double t, const Vector9& y) {
      if (!y.allFinite()) {
        throw NonFiniteState("observables became non-finite during integration");
      }
      traj.times[row] = t;
      traj.values.row(row) = y.transpose();
      ++row;
    });
  } else {
    const Eigen::Matrix3d a =
        reduce_to_locked(analytic_coefficients9(params)).matrix;
    traj.labels = {"Mx", "W", "Mzy"};
    traj.values.resize(grid.samples + 1, 3);
    Eigen::Vector3d y0(ic.m0, 0.0, 0.0);
    drive(a, y0, grid, step, [&](double t, const Eigen::Vector3d& y) {
      if (!y.allFinite()) {
        throw NonFiniteState("locked sector became non-finite during integration");
      }
      traj.times[row] = t;
      traj.values.row(row) = y.transpose();
      ++row;
    });
  }
  return traj;
}

std::optional<std::pair<double, Eigen::VectorXd>> steady_state_detect(
    const Trajectory& traj, double window, double tol) {
  if (!(window > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("window and tol must be positive");
  }
  const long n = static_cast<long>(traj.times.size());
  if (n == 0 || traj.times.back() < window) {
    throw std::invalid_argument("trajectory shorter than the detection window");
  }
  const int cols = static_cast<int>(traj.values.cols());
  const double bound = tol * traj.params.m0;

  // quiet[j]: every column varies by less than the bound over
  // [times[j] - window, times[j]].
  std::vector<char> quiet(n, 0);
  long start = 0;
  long first_eligible = -1;
  for (long j = 0; j < n; ++j) {
    if (traj.times[j] < window) continue;
    if (first_eligible < 0) first_eligible = j;
    while (traj.times[start] < traj.times[j] - window - 1e-12) ++start;
    bool ok = true;
    for (int c = 0; c < cols && ok; ++c) {
      double lo = traj.values(start, c);
      double hi = lo;
      for (long i = start + 1; i <= j; ++i) {
        lo = std::min(lo, traj.values(i, c));
        hi = std::max(hi, traj.values(i, c));
      }
      ok = (hi - lo) < bound;
    }
    quiet[j] = ok;
  }
  if (first_eligible < 0) {
    throw std::invalid_argument("trajectory shorter than the detection window");
  }
  // Earliest sample after which the trajectory stays quiet for good.
  long settled = -1;
  for (long j = n - 1; j >= first_eligible; --j) {
    if (!quiet[j]) break;
    settled = j;
  }
  if (settled < 0) return std::nullopt;
  return std::make_pair(traj.times[settled],
                        Eigen::VectorXd(traj.values.row(settled).transpose()));
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  std::string line = "t";
  for (const auto& label : traj.labels) {
    line += ',';
    line += label;
  }
  line += '\n';
  out << line;
  for (long r = 0; r < traj.values.rows(); ++r) {
    line.clear();
    append_full(line, traj.times[r]);
    for (int c = 0; c < traj.values.cols(); ++c) {
      line += ',';
      append_full(line, traj.values(r, c));
    }
    line += '\n';
    out << line;
  }
}

void write_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  write_csv(traj, out);
  if (!out.good()) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

}  // namespace spinpair
