#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinpair/analysis.hpp"
#include "spinpair/cli.hpp"
#include "spinpair/verify.hpp"

namespace py = pybind11;
using namespace spinpair;

namespace {

StepControl make_step(double dt, bool adaptive, double rel_tol,
                      double sample_spacing) {
  StepControl step;
  step.dt = dt;
  step.adaptive = adaptive;
  step.rel_tol = rel_tol;
  step.sample_spacing = sample_spacing;
  return step;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dissipative dynamics of a driven dipolar-coupled spin pair";

  const auto base = py::register_exception<SimulationError>(m, "SimulationError");
  py::register_exception<NonHermitianObservable>(m, "NonHermitianObservable", base);
  py::register_exception<UnsupportedOffResonance>(m, "UnsupportedOffResonance", base);
  py::register_exception<ClosureViolation>(m, "ClosureViolation", base);
  py::register_exception<ReductionLeak>(m, "ReductionLeak", base);
  py::register_exception<StepSizeUnderflow>(m, "StepSizeUnderflow", base);
  py::register_exception<NonFiniteState>(m, "NonFiniteState", base);
  py::register_exception<InvalidM0>(m, "InvalidM0", base);
  py::register_exception<DegenerateParams>(m, "DegenerateParams", base);
  py::register_exception<RankError>(m, "RankError", base);
  py::register_exception<NeverLocks>(m, "NeverLocks", base);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](double omega1, double omega_d, double tau_c, double m0,
                       double delta_omega, double omega0) {
             PhysicalParams p;
             p.omega1 = omega1;
             p.omega_d = omega_d;
             p.tau_c = tau_c;
             p.m0 = m0;
             p.delta_omega = delta_omega;
             p.omega0 = omega0;
             return p;
           }),
           py::arg("omega1") = 0.0, py::arg("omega_d") = 0.0,
           py::arg("tau_c") = 1e-6, py::arg("m0") = 1.0,
           py::arg("delta_omega") = 0.0, py::arg("omega0") = 0.0)
      .def_readwrite("omega1", &PhysicalParams::omega1)
      .def_readwrite("omega_d", &PhysicalParams::omega_d)
      .def_readwrite("tau_c", &PhysicalParams::tau_c)
      .def_readwrite("m0", &PhysicalParams::m0)
      .def_readwrite("delta_omega", &PhysicalParams::delta_omega)
      .def_readwrite("omega0", &PhysicalParams::omega0)
      .def("validate", &PhysicalParams::validate)
      .def("__repr__", [](const PhysicalParams& p) {
        return "PhysicalParams(omega1=" + std::to_string(p.omega1) +
               ", omega_d=" + std::to_string(p.omega_d) +
               ", tau_c=" + std::to_string(p.tau_c) + ")";
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("engine",
                             [](const Trajectory& t) { return engine_name(t.engine); })
      .def_property_readonly("labels",
                             [](const Trajectory& t) { return t.labels; })
      .def_property_readonly(
          "times",
          [](const Trajectory& t) {
            return Eigen::Map<const Eigen::VectorXd>(t.times.data(),
                                                     t.times.size());
          },
          py::return_value_policy::copy)
      .def_property_readonly("values",
                             [](const Trajectory& t) { return t.values; })
      .def_readonly("max_trace_dev", &Trajectory::max_trace_dev)
      .def_readonly("max_herm_dev", &Trajectory::max_herm_dev)
      .def("column", &Trajectory::column, py::arg("label"))
      .def("final_values", &Trajectory::final_values);

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("mx_ss", &SteadyState::mx_ss)
      .def_readonly("w_ss", &SteadyState::w_ss)
      .def_readonly("mzy_ss", &SteadyState::mzy_ss)
      .def_property_readonly("source", [](const SteadyState& s) {
        switch (s.source) {
          case SteadyState::Source::closed_form:
            return "closed_form";
          case SteadyState::Source::nullspace:
            return "nullspace";
          default:
            return "long_time";
        }
      });

  m.def("spin_operators", [] {
    const SpinOperators& ops = spin_operators();
    py::dict d;
    d["1"] = ops.identity;
    d["Ix"] = ops.ix;
    d["Iy"] = ops.iy;
    d["Iz"] = ops.iz;
    d["Sx"] = ops.sx;
    d["Sy"] = ops.sy;
    d["Sz"] = ops.sz;
    d["Fx"] = ops.fx;
    d["Fy"] = ops.fy;
    d["Fz"] = ops.fz;
    d["Fzz"] = ops.fzz;
    d["Fxx"] = ops.fxx;
    d["Fyy"] = ops.fyy;
    d["Fzx"] = ops.fzx;
    d["Fzy"] = ops.fzy;
    d["Fxy"] = ops.fxy;
    return d;
  });

  m.def("commutator", &commutator, py::arg("a"), py::arg("b"));
  m.def("secular_dipolar", &secular_dipolar, py::arg("params"));
  m.def("drive_rotating", &drive_rotating, py::arg("params"));
  m.def(
      "build_liouvillian",
      [](const PhysicalParams& p) { return build_liouvillian(p).matrix; },
      py::arg("params"));
  m.def(
      "liouvillian_parts",
      [](const PhysicalParams& p) {
        const Liouvillian l = build_liouvillian(p);
        py::dict d;
        d["first_order"] = l.first_order;
        d["drive_drive"] = l.drive_drive;
        d["drive_dipole"] = l.drive_dipole;
        d["dipole_drive"] = l.dipole_drive;
        d["dipole_dipole"] = l.dipole_dipole;
        d["total"] = l.matrix;
        return d;
      },
      py::arg("params"));
  m.def(
      "omega_d_from_geometry",
      [](double gamma, double r, double theta, double phi) {
        return omega_d_from_geometry(Geometry{gamma, r, theta, phi});
      },
      py::arg("gamma"), py::arg("r"), py::arg("theta"), py::arg("phi") = 0.0);
  m.def("validate_regime", &validate_regime, py::arg("params"));

  m.def("observable_labels", [] {
    return std::vector<std::string>(kObservableLabels.begin(),
                                    kObservableLabels.end());
  });
  m.def(
      "analytic_coefficients9",
      [](const PhysicalParams& p) -> Matrix9 {
        return analytic_coefficients9(p).matrix;
      },
      py::arg("params"));
  m.def(
      "project_coefficients9",
      [](const PhysicalParams& p) -> Matrix9 {
        return project_generator(build_liouvillian(p), TwoSpinBasis::standard())
            .matrix;
      },
      py::arg("params"));
  m.def(
      "reduced_coefficients3",
      [](const PhysicalParams& p) -> Eigen::Matrix3d {
        return reduce_to_locked(analytic_coefficients9(p)).matrix;
      },
      py::arg("params"));

  m.def(
      "integrate",
      [](const PhysicalParams& params, const std::string& engine, double t_end,
         double m0, double dt, bool adaptive, double rel_tol,
         double sample_spacing) {
        const double start = m0 > 0.0 ? m0 : params.m0;
        return integrate(engine_from_name(engine), params,
                         InitialCondition{start}, t_end,
                         make_step(dt, adaptive, rel_tol, sample_spacing));
      },
      py::arg("params"), py::arg("engine") = "observable9",
      py::arg("t_end") = 0.05, py::arg("m0") = 0.0, py::arg("dt") = 1e-7,
      py::arg("adaptive") = false, py::arg("rel_tol") = 1e-10,
      py::arg("sample_spacing") = 1e-5);

  m.def("steady_state_mx", &steady_state_mx, py::arg("params"));
  m.def(
      "steady_state_nullspace",
      [](const PhysicalParams& p, double m0) {
        const double start = m0 > 0.0 ? m0 : p.m0;
        return steady_state_nullspace(reduce_to_locked(analytic_coefficients9(p)),
                                      InitialCondition{start});
      },
      py::arg("params"), py::arg("m0") = 0.0);
  m.def("lock_time", &lock_time, py::arg("trajectory"), py::arg("fraction") = 0.05);
  m.def(
      "steady_state_detect",
      [](const Trajectory& traj, double window, double tol)
          -> py::object {
        const auto found = steady_state_detect(traj, window, tol);
        if (!found) return py::none();
        return py::make_tuple(found->first, found->second);
      },
      py::arg("trajectory"), py::arg("window"), py::arg("tol"));

  m.def(
      "sweep",
      [](const PhysicalParams& base, const std::vector<double>& omega1_grid,
         double t_end, double dt, double sample_spacing) {
        std::vector<PhysicalParams> grid;
        for (double w1 : omega1_grid) {
          PhysicalParams p = base;
          p.omega1 = w1;
          grid.push_back(p);
        }
        const SweepResult result =
            sweep(grid, t_end, make_step(dt, false, 1e-10, sample_spacing));
        py::list rows;
        for (const auto& point : result.points) {
          py::dict row;
          row["omega1"] = point.params.omega1;
          row["omega_d"] = point.params.omega_d;
          row["tau_c"] = point.params.tau_c;
          row["mx_ss_closed"] = point.mx_ss_closed;
          row["mx_ss_numeric"] = point.mx_ss_numeric;
          row["w_ss"] = point.w_ss;
          row["lock_time_s"] = point.lock_time_s;
          row["status"] = point.status;
          rows.append(row);
        }
        return rows;
      },
      py::arg("params"), py::arg("omega1_grid"), py::arg("t_end") = 0.05,
      py::arg("dt") = 1e-7, py::arg("sample_spacing") = 1e-5);

  m.attr("__version__") = "0.1.0";
}
