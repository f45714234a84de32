#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "spinpair/observable_ode.hpp"

namespace spinpair {

enum class Engine {
  density,      // full 4x4 density operator under the vectorized generator
  observable9,  // nine coupled symmetric observables
  reduced3,     // locked sector (Mx, W, Mzy)
};

std::string engine_name(Engine engine);
Engine engine_from_name(const std::string& name);

struct StepControl {
  bool adaptive = false;
  double dt = 1e-7;              // fixed-step size
  double rel_tol = 1e-10;        // adaptive per-step relative tolerance
  double sample_spacing = 1e-5;  // interval between stored samples
};

struct InitialCondition {
  double m0 = 1.0;
};

// rho(0) = 1/4 + (m0/2) Fx: unit trace, Mx = m0, every other coupled
// observable zero.
DensityState initial_density(const InitialCondition& ic);

struct Trajectory {
  Engine engine = Engine::observable9;
  PhysicalParams params;
  StepControl step;  // step actually used (dt is snapped to the sample grid)
  std::vector<std::string> labels;
  std::vector<double> times;  // times[0] == 0
  Eigen::MatrixXd values;     // one row per sample, one column per label

  // Density engine only: worst deviation of Tr[rho] from 1 and of rho from
  // its adjoint seen at any sample.
  double max_trace_dev = 0.0;
  double max_herm_dev = 0.0;

  int column(const std::string& label) const;
  Eigen::VectorXd final_values() const;
};

// Evolves the initial state under the generator for the given parameters and
// samples every step.sample_spacing seconds (t = 0 included). All three
// engines integrate the same dynamics; they agree to integration accuracy.
Trajectory integrate(Engine engine, const PhysicalParams& params,
                     const InitialCondition& ic, double t_end,
                     const StepControl& step = {});

// First sampled time t such that every column varies by less than
// tol * params.m0 over every window [s - window, s] with s >= t, together
// with the row at that time. nullopt if the trajectory never settles.
std::optional<std::pair<double, Eigen::VectorXd>> steady_state_detect(
    const Trajectory& traj, double window, double tol);

void write_csv(const Trajectory& traj, std::ostream& out);
void write_csv(const Trajectory& traj, const std::string& path);

namespace ode {

// Fixed-step classical Runge-Kutta for y' = a y. Calls on_sample(t, y) at
// t = 0 and after every steps_per_sample steps. Vec may be real or complex.
template <typename Mat, typename Vec, typename OnSample>
void integrate_fixed_rk4(const Mat& a, Vec y, double dt, long steps_per_sample,
                         long samples, OnSample&& on_sample) {
  on_sample(0.0, y);
  for (long s = 1; s <= samples; ++s) {
    for (long k = 0; k < steps_per_sample; ++k) {
      const Vec k1 = a * y;
      const Vec k2 = a * (y + (0.5 * dt) * k1);
      const Vec k3 = a * (y + (0.5 * dt) * k2);
      const Vec k4 = a * (y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    on_sample(static_cast<double>(s) * steps_per_sample * dt, y);
  }
}

// Embedded Cash-Karp 4(5) pair with standard step-size control, sampling at
// multiples of `spacing`. The error is measured relative to
// rel_tol * (|y| + |h y'|) component-wise.
template <typename Mat, typename Vec, typename OnSample>
void integrate_adaptive_ck(const Mat& a, Vec y, double spacing, long samples,
                           double rel_tol, OnSample&& on_sample) {
  constexpr double b21 = 1.0 / 5.0;
  constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                   b54 = 35.0 / 27.0;
  constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                   b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                   b65 = 253.0 / 4096.0;
  constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                   c6 = 512.0 / 1771.0;
  constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                   d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                   d6 = c6 - 1.0 / 4.0;

  on_sample(0.0, y);
  double t = 0.0;
  double h = spacing / 16.0;
  for (long s = 1; s <= samples; ++s) {
    const double t_target = static_cast<double>(s) * spacing;
    while (t < t_target) {
      if (t + h > t_target) h = t_target - t;
      const Vec k1 = a * y;
      const Vec k2 = a * (y + h * (b21 * k1));
      const Vec k3 = a * (y + h * (b31 * k1 + b32 * k2));
      const Vec k4 = a * (y + h * (b41 * k1 + b42 * k2 + b43 * k3));
      const Vec k5 = a * (y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
      const Vec k6 =
          a * (y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
      const Vec y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
      const Vec delta = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);

      double err = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double scale =
            rel_tol * (std::abs(y(i)) + std::abs(h * k1(i))) + 1e-300;
        err = std::max(err, std::abs(delta(i)) / scale);
      }
      if (!std::isfinite(err)) {
        throw NonFiniteState("adaptive step produced a non-finite state");
      }
      if (err <= 1.0) {
        t += h;
        y = y5;
        h *= (err > 1e-4) ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
      } else {
        // Only error-driven shrinkage can underflow; the end-of-interval
        // clamp above may legitimately leave a sub-epsilon final step.
        h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
        if (h < spacing * std::numeric_limits<double>::epsilon()) {
          throw StepSizeUnderflow(
              "adaptive step size underflowed; tolerance unreachable");
        }
      }
      if (t + h == t) {
        throw StepSizeUnderflow(
            "adaptive step size underflowed; tolerance unreachable");
      }
    }
    t = t_target;
    on_sample(t, y);
  }
}

}  // namespace ode

}  // namespace spinpair
