#include "spinpair/analysis.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "spinpair/verify.hpp"
#include "test_util.hpp"

using namespace spinpair;
using testutil::max_abs_diff;

namespace {

CoefficientMatrix3 locked_system(const PhysicalParams& p) {
  return reduce_to_locked(analytic_coefficients9(p));
}

Trajectory settle(const PhysicalParams& p, double t_end = 0.02) {
  StepControl step;
  step.dt = 1e-6;
  return integrate(Engine::observable9, p, InitialCondition{p.m0}, t_end, step);
}

}  // namespace

TEST_CASE("closed-form locked moment") {
  PhysicalParams p = testutil::locked_params();
  CHECK(std::abs(steady_state_mx(p) - 64.0 / 289.0) <= 1e-15);

  SUBCASE("limits") {
    p.omega1 = 0.0;
    CHECK(steady_state_mx(p) == 0.0);

    p = testutil::locked_params();
    p.omega_d = 0.0;
    CHECK(steady_state_mx(p) == p.m0);

    p.omega1 = 0.0;
    CHECK_THROWS_AS(steady_state_mx(p), DegenerateParams);
  }

  SUBCASE("scales with the initial moment and not with tau_c") {
    p.m0 = 0.5;
    CHECK(std::abs(steady_state_mx(p) - 32.0 / 289.0) <= 1e-15);
    PhysicalParams q = p;
    q.tau_c = 5e-6;
    CHECK(steady_state_mx(q) == steady_state_mx(p));
  }

  SUBCASE("depends only on the frequency ratio") {
    PhysicalParams q = testutil::locked_params();
    q.omega1 *= 10.0;
    q.omega_d *= 10.0;
    CHECK(steady_state_mx(q) ==
          doctest::Approx(steady_state_mx(testutil::locked_params())).epsilon(1e-14));
  }

  SUBCASE("even in the coupling sign") {
    PhysicalParams q = testutil::locked_params();
    q.omega_d = -q.omega_d;
    CHECK(steady_state_mx(q) == steady_state_mx(testutil::locked_params()));
  }

  SUBCASE("never exceeds the initial moment") {
    for (double w1 : {100.0, 3000.0, 2e4}) {
      PhysicalParams q = testutil::locked_params();
      q.omega1 = w1;
      CHECK(steady_state_mx(q) <= q.m0);
      CHECK(steady_state_mx(q) > 0.0);
    }
  }
}

TEST_CASE("steady state from the kernel of the reduced generator") {
  const PhysicalParams p = testutil::locked_params();
  const SteadyState ss = steady_state_nullspace(locked_system(p), {p.m0});

  CHECK(ss.source == SteadyState::Source::nullspace);
  const double closed = steady_state_mx(p);
  CHECK(std::abs(ss.mx_ss - closed) <= 1e-12 * closed);
  // w_ss / mx_ss = 3 omega_d / (8 omega1) = 15/16 at the reference point.
  CHECK(ss.w_ss / ss.mx_ss == doctest::Approx(0.9375).epsilon(1e-12));
  CHECK(ss.mzy_ss == 0.0);

  SUBCASE("scales linearly in the initial moment") {
    const SteadyState half = steady_state_nullspace(locked_system(p), {0.5});
    CHECK(half.mx_ss == doctest::Approx(0.5 * ss.mx_ss).epsilon(1e-15));
    CHECK(half.w_ss == doctest::Approx(0.5 * ss.w_ss).epsilon(1e-15));
  }

  SUBCASE("without coupling everything stays on the drive") {
    PhysicalParams q = p;
    q.omega_d = 0.0;
    const SteadyState free = steady_state_nullspace(locked_system(q), {q.m0});
    CHECK(free.mx_ss == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(free.w_ss) <= 1e-12);
  }

  SUBCASE("no drive is degenerate") {
    CHECK_THROWS_AS(steady_state_nullspace(locked_system(testutil::undriven_params()),
                                           {1.0}),
                    DegenerateParams);
  }

  SUBCASE("a kernel of the wrong shape is refused") {
    CoefficientMatrix3 flat;
    flat.params = p;
    flat.matrix = Eigen::Matrix3d::Zero();
    CHECK_THROWS_AS(steady_state_nullspace(flat, {1.0}), RankError);

    CoefficientMatrix3 sideways;
    sideways.params = p;
    sideways.matrix = Eigen::Vector3d(1.0, 0.0, 2.0).asDiagonal();
    CHECK_THROWS_AS(steady_state_nullspace(sideways, {1.0}), RankError);
  }
}

TEST_CASE("lock time") {
  const PhysicalParams p = testutil::locked_params();

  SUBCASE("a trajectory born settled locks immediately") {
    Trajectory traj;
    traj.engine = Engine::observable9;
    traj.params = p;
    traj.labels.assign(kObservableLabels.begin(), kObservableLabels.end());
    const double target = steady_state_mx(p);
    traj.times = {0.0, 1e-5, 2e-5, 3e-5};
    traj.values = Eigen::MatrixXd::Zero(4, 9);
    traj.values.col(oMx).setConstant(target);
    CHECK(lock_time(traj) == 0.0);
    CHECK_THROWS_AS(lock_time(traj, 0.0), std::invalid_argument);
  }

  SUBCASE("reference point locks within a couple of milliseconds") {
    const double t_lock = lock_time(settle(p));
    CHECK(t_lock >= 1.2e-3);
    CHECK(t_lock <= 1.8e-3);
  }

  SUBCASE("a horizon inside the transient never locks") {
    CHECK_THROWS_AS(lock_time(settle(p, 2e-4)), NeverLocks);
  }

  SUBCASE("stronger fluctuations lock faster without moving the target") {
    PhysicalParams fast = p;
    fast.tau_c = 2e-6;
    const Trajectory slow_traj = settle(p);
    const Trajectory fast_traj = settle(fast);
    CHECK(lock_time(fast_traj) < lock_time(slow_traj));
    CHECK(std::abs(fast_traj.final_values()(oMx) - slow_traj.final_values()(oMx)) <=
          1e-6);
  }
}

TEST_CASE("parameter sweep") {
  StepControl step;
  step.dt = 1e-6;

  SUBCASE("a single point reproduces the direct calculation") {
    const PhysicalParams p = testutil::locked_params();
    const SweepResult result = sweep({p}, 0.02, step);
    REQUIRE(result.points.size() == 1);
    const SweepPoint& point = result.points[0];
    CHECK(point.status == "ok");
    CHECK(point.mx_ss_closed == steady_state_mx(p));
    const Trajectory traj = settle(p);
    CHECK(point.mx_ss_numeric == traj.final_values()(oMx));
    CHECK(point.lock_time_s == lock_time(traj));
    CHECK(point.w_ss ==
          doctest::Approx(steady_state_nullspace(locked_system(p), {p.m0}).w_ss)
              .epsilon(1e-15));
  }

  SUBCASE("drive scan: stronger drives lock sooner and hold more moment") {
    std::vector<PhysicalParams> grid;
    for (double f : {500.0, 1000.0, 2000.0, 4000.0}) {
      PhysicalParams p = testutil::locked_params();
      p.omega1 = testutil::kTwoPi * f;
      grid.push_back(p);
    }
    const SweepResult result = sweep(grid, 0.05, step);
    REQUIRE(result.points.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
      const SweepPoint& point = result.points[i];
      CHECK(point.status == "ok");
      CHECK(std::abs(point.mx_ss_numeric - point.mx_ss_closed) <=
            0.01 * point.mx_ss_closed);
      const double expected_w =
          3.0 * point.params.omega_d / (8.0 * point.params.omega1) *
          point.mx_ss_closed;
      CHECK(point.w_ss == doctest::Approx(expected_w).epsilon(1e-9));
      if (i > 0) {
        CHECK(point.lock_time_s < result.points[i - 1].lock_time_s);
        CHECK(point.mx_ss_closed > result.points[i - 1].mx_ss_closed);
      }
    }

    SUBCASE("flipping the coupling sign changes nothing observable") {
      std::vector<PhysicalParams> mirrored = grid;
      for (auto& p : mirrored) p.omega_d = -p.omega_d;
      const SweepResult flipped = sweep(mirrored, 0.05, step);
      for (size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(flipped.points[i].mx_ss_numeric -
                       result.points[i].mx_ss_numeric) <= 1e-10);
        CHECK(flipped.points[i].mx_ss_closed == result.points[i].mx_ss_closed);
      }
    }
  }

  SUBCASE("statuses keep independent failures independent") {
    PhysicalParams undriven = testutil::undriven_params();
    PhysicalParams good = testutil::locked_params();
    PhysicalParams broken = testutil::locked_params();
    broken.m0 = 2.0;
    const SweepResult result = sweep({undriven, good, broken}, 0.01, step);
    REQUIRE(result.points.size() == 3);
    CHECK(result.points[0].status == "never_locks");
    CHECK(std::isnan(result.points[0].lock_time_s));
    CHECK(std::abs(result.points[0].mx_ss_numeric) < 1e-3);  // decayed instead
    CHECK(result.points[1].status == "ok");
    CHECK(result.points[2].status.substr(0, 6) == "error:");
  }

  SUBCASE("duplicate grid points are rejected") {
    const PhysicalParams p = testutil::locked_params();
    CHECK_THROWS_AS(sweep({p, p}, 0.01, step), std::invalid_argument);
  }

  SUBCASE("CSV schema") {
    PhysicalParams a = testutil::locked_params();
    PhysicalParams b = a;
    b.omega1 = testutil::kTwoPi * 4000.0;
    const SweepResult result = sweep({a, b}, 0.02, step);
    std::ostringstream out;
    write_csv(result, out);
    std::istringstream in(out.str());
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header ==
          "omega1_rad_s,omega_d_rad_s,tau_c_s,mx_ss_closed,mx_ss_numeric,w_ss,"
          "lock_time_s,status");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::istringstream fields(line);
      std::string field;
      int count = 0;
      while (std::getline(fields, field, ',')) {
        if (count < 7) {
          size_t used = 0;
          const double v = std::stod(field, &used);
          CHECK(used == field.size());
          CHECK(std::isfinite(v));
        } else {
          CHECK(field == "ok");
        }
        ++count;
      }
      CHECK(count == 8);
    }
    CHECK(rows == 2);
  }
}

TEST_CASE("self-verification") {
  VerifyOptions opts;
  opts.trials = 25;

  const VerifyReport report = run_verification(opts);
  CHECK(report.trials == 25);
  REQUIRE(report.checks.size() == 7);
  CHECK(report.all_pass());
  for (const auto& check : report.checks) {
    CHECK(!check.name.empty());
    CHECK(!check.detail.empty());
    CHECK(check.pass);
  }

  SUBCASE("a planted sign error is caught and located") {
    opts.inject_flip = std::make_pair(static_cast<int>(oMz), static_cast<int>(oMy));
    const VerifyReport bad = run_verification(opts);
    CHECK_FALSE(bad.all_pass());
    CHECK_FALSE(bad.checks[0].pass);
    CHECK(bad.checks[0].detail.find("Mz row") != std::string::npos);
    CHECK(bad.checks[0].detail.find("My column") != std::string::npos);
  }

  SUBCASE("option validation") {
    opts.trials = 0;
    CHECK_THROWS_AS(run_verification(opts), std::invalid_argument);
    opts.trials = 5;
    opts.inject_flip = std::make_pair(9, 0);
    CHECK_THROWS_AS(run_verification(opts), std::invalid_argument);
  }
}
