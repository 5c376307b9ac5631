#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "ots/error.hpp"
#include "ots/sim.hpp"

using namespace ots;

namespace {

ModelParams direct_drive() {
  ModelParams p = table1_params();
  p.Rb = 0.0;
  return p;
}

}  // namespace

TEST(Waveform, ShapesAndHold) {
  Waveform w(SourceKind::Voltage, {{0.0, 1.0, SegmentShape::Ramp, 0.0, 2.0},
                                   {1.0, 2.0, SegmentShape::Constant, 2.0, 2.0},
                                   {2.0, 3.0, SegmentShape::Pulse, 0.0, 5.0}});
  EXPECT_EQ(w.value(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(w.value(0.5), 1.0);
  EXPECT_EQ(w.value(1.5), 2.0);
  EXPECT_EQ(w.value(2.5), 5.0);
  EXPECT_EQ(w.value(3.0), 0.0);  // pulse returns to base after its end
  EXPECT_EQ(w.t_begin(), 0.0);
  EXPECT_EQ(w.t_end(), 3.0);
}

TEST(Waveform, RejectsGapsAndEmptySegments) {
  EXPECT_THROW(Waveform(SourceKind::Voltage, {}), DomainError);
  EXPECT_THROW(Waveform(SourceKind::Voltage, {{0.0, 0.0}}), DomainError);
  EXPECT_THROW(Waveform(SourceKind::Voltage, {{0.0, 1.0}, {1.5, 2.0}}), DomainError);
}

TEST(SweepLevels, Directions) {
  SweepSpec s;
  s.start = 0.0;
  s.stop = 4.0;
  s.points = 5;
  EXPECT_EQ(sweep_levels(s), (std::vector<double>{0, 1, 2, 3, 4}));
  s.direction = SweepDirection::Down;
  EXPECT_EQ(sweep_levels(s), (std::vector<double>{4, 3, 2, 1, 0}));
  s.direction = SweepDirection::UpDown;
  EXPECT_EQ(sweep_levels(s), (std::vector<double>{0, 1, 2, 3, 4, 3, 2, 1, 0}));
  s.direction = SweepDirection::Up;
  s.spacing = SweepSpacing::Log;
  s.start = 1e-3;
  s.stop = 1e1;
  const auto lv = sweep_levels(s);
  EXPECT_EQ(lv.front(), 1e-3);
  EXPECT_EQ(lv.back(), 1e1);
  EXPECT_NEAR(lv[2], 1e-1, 1e-15);
}

TEST(SweepLevels, Validation) {
  SweepSpec s;
  s.points = 1;
  EXPECT_THROW(sweep_levels(s), DomainError);
  s.points = 3;
  s.dwell = 0;
  EXPECT_THROW(sweep_levels(s), DomainError);
  s.dwell = 1;
  s.spacing = SweepSpacing::Log;
  s.start = 0;
  s.stop = 1;
  EXPECT_THROW(sweep_levels(s), DomainError);
}

TEST(StepState, Examples) {
  const ModelParams p = table1_params();
  const DeviceState off = step_state({0.0, false, 0.0}, 1.0, 0.5, p);
  EXPECT_EQ(off.zeta, 0.0);
  EXPECT_FALSE(off.triggered);
  EXPECT_EQ(off.t, 0.5);

  const DeviceState on = step_state({0.0, false, 0.0}, 2.4, tau(p), p);
  EXPECT_TRUE(on.triggered);
  EXPECT_NEAR(on.zeta, 0.6321205588285577, 1e-15);
  EXPECT_THROW(step_state({}, 0.0, 0.0, p), DomainError);
}

TEST(StepState, HalfStepsComposeExactly) {
  const ModelParams p = table1_params();
  for (bool trig : {false, true}) {
    const double v = trig ? 3.0 : 0.0;
    const DeviceState s0{0.4, trig, 0.0};
    const DeviceState full = step_state(s0, v, 0.004, p);
    const DeviceState half = step_state(step_state(s0, v, 0.002, p), v, 0.002, p);
    EXPECT_LT(oracle::rel_err(half.zeta, full.zeta), 1e-12);
  }
}

TEST(StepState, SemigroupProperty) {
  const ModelParams p = table1_params();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> logdt(-6.0, 1.0), z(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double dt1 = tau(p) * std::pow(10.0, logdt(rng));
    const double dt2 = tau(p) * std::pow(10.0, logdt(rng));
    const bool trig = k % 2;
    const double v = trig ? 3.0 : 0.0;
    const DeviceState s0{z(rng), trig, 0.0};
    const double two = step_state(step_state(s0, v, dt1, p), v, dt2, p).zeta;
    const double one = step_state(s0, v, dt1 + dt2, p).zeta;
    if (one == 0.0) {
      EXPECT_EQ(two, 0.0);
    } else {
      EXPECT_LT(oracle::rel_err(two, one), 1e-12) << dt1 << ' ' << dt2 << ' ' << trig;
    }
  }
}

TEST(SolveVForCurrent, Examples) {
  const ModelParams p = table1_params();
  EXPECT_NEAR(solve_v_for_current(0.0, 0.0, 0.0, p, -1.0, 1.0, 1e-6), 0.0, 1e-6);
  const double i1 = static_current(1.0, 0.0, p);
  EXPECT_NEAR(solve_v_for_current(i1, 0.0, 0.0, p, -10.0, 10.0, 1e-6), 1.0, 1e-6);
}

TEST(SolveVForCurrent, BracketAndIterationErrors) {
  const ModelParams p = table1_params();
  EXPECT_THROW(solve_v_for_current(1.0, 0.0, 0.0, p, -1.0, 0.5, 1e-6), BracketError);
  EXPECT_THROW(solve_v_for_current(1e-9, 0.0, 0.0, p, -10.0, 10.0, 1e-12, 3), ConvergenceError);
  EXPECT_THROW(solve_v_for_current(1e-9, 0.0, 0.0, p, 1.0, 1.0, 1e-6), DomainError);
  EXPECT_THROW(solve_v_for_current(1e-9, 0.0, 0.0, p, 0.0, 1.0, 0.0), DomainError);
}

TEST(SolveVForCurrent, RoundTripProperty) {
  const ModelParams p = table1_params();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-1.0, 3.0), z(0.0, 1.0), rate(-100.0, 100.0);
  const double tol = 1e-6;
  for (int k = 0; k < 1000; ++k) {
    const double vs = v(rng), zeta = z(rng), dz = rate(rng);
    const double target = total_current(vs, zeta, dz, p);
    const double got = solve_v_for_current(target, zeta, dz, p, vs - 1.0, vs + 1.0, tol);
    EXPECT_NEAR(got, vs, 10 * tol);
  }
}

TEST(LoadLine, SatisfiesKvl) {
  const ModelParams p = table1_params();
  for (double vsrc : {0.0, 0.5, 1.0, 3.0, 10.0}) {
    const double v = solve_v_on_load_line(vsrc, 0.0, 0.0, p);
    const double i = total_current(v, 0.0, 0.0, p);
    EXPECT_NEAR(v + i * p.Rb, vsrc, 1e-5) << vsrc;
    EXPECT_LE(v, vsrc + 1e-9);
  }
  EXPECT_EQ(solve_v_on_load_line(1.7, 0.0, 0.0, direct_drive()), 1.7);
}

TEST(RunTransient, ZeroDriveStaysAtRest) {
  const ModelParams p = table1_params();
  const Waveform w(SourceKind::Voltage, {{0.0, 0.01, SegmentShape::Constant, 0.0, 0.0}});
  const TransientResult r = run_transient(w, p, 1e-3, 0.0);
  ASSERT_EQ(r.samples.size(), 11u);
  for (const auto& s : r.samples) {
    EXPECT_EQ(s.i_device, 0.0);
    EXPECT_EQ(s.zeta, 0.0);
    EXPECT_FALSE(s.triggered);
  }
}

TEST(RunTransient, ZeroDriveDecaysFromInitialState) {
  const ModelParams p = table1_params();
  const Waveform w(SourceKind::Voltage, {{0.0, 0.05, SegmentShape::Constant, 0.0, 0.0}});
  const TransientResult r = run_transient(w, p, 1e-3, 0.8);
  for (const auto& s : r.samples)
    EXPECT_LT(oracle::rel_err(s.zeta, 0.8 * std::exp(-s.t / tau(p))), 1e-12);
}

TEST(RunTransient, TriggeredStepReachesSaturation) {
  const ModelParams p = direct_drive();
  const Waveform w(SourceKind::Voltage, {{0.0, 0.05, SegmentShape::Constant, 2.5, 2.5}});
  const TransientResult r = run_transient(w, p, 1e-5, 0.0);
  ASSERT_EQ(r.samples.size(), 5001u);
  for (const auto& s : r.samples) {
    EXPECT_TRUE(s.triggered);
    EXPECT_EQ(s.v_device, 2.5);
    EXPECT_LT(oracle::rel_err(s.zeta, static_cast<double>(oracle::state(s.t, 0.0, p, true))),
              1e-9);
  }
  EXPECT_GE(r.samples.back().zeta, 0.99 * zeta_on(p));
  for (std::size_t k = 1; k < r.samples.size(); ++k)
    EXPECT_GT(r.samples[k].t, r.samples[k - 1].t);
}

TEST(RunTransient, PulseRisesThenDecays) {
  const ModelParams p = direct_drive();
  const double T = tau(p);
  const Waveform w(SourceKind::Voltage, {{0.0, T, SegmentShape::Pulse, 0.0, 3.0},
                                         {T, 4 * T, SegmentShape::Constant, 0.0, 0.0}});
  const double dt = T / 100;
  const TransientResult r = run_transient(w, p, dt, 0.0);
  const double peak = static_cast<double>(oracle::state(T, 0.0, p, true));
  EXPECT_NEAR(peak, 0.632121, 1e-6);
  for (const auto& s : r.samples) {
    const double want = s.t <= T * (1 + 1e-12)
                            ? static_cast<double>(oracle::state(s.t, 0.0, p, true))
                            : static_cast<double>(oracle::state(s.t - T, peak, p, false));
    EXPECT_NEAR(s.zeta, want, 1e-12) << s.t;
  }
}

TEST(RunTransient, CapacitiveDipAtTurnOn) {
  const ModelParams p = direct_drive();
  const Waveform w(SourceKind::Voltage, {{0.0, 1e-3, SegmentShape::Constant, 0.1, 0.1}});
  ModelParams q = p;
  q.v_th = 0.05;  // trigger at 0.1 V
  const TransientResult r = run_transient(w, q, 1e-4, 0.0);
  // First sample: zeta = 0, rate = 100 V/s -> i = f(0.1) - C*K*100
  EXPECT_NEAR(r.samples.front().i_device, -6.999999310450582e-7, 1e-15);
}

TEST(RunTransient, CurrentDriveSolvesVoltage) {
  const ModelParams p = table1_params();
  const Waveform w(SourceKind::Current, {{0.0, 1e-3, SegmentShape::Ramp, 1e-9, 1e-6}});
  const TransientResult r = run_transient(w, p, 1e-4, 0.0);
  for (const auto& s : r.samples) EXPECT_LT(oracle::rel_err(s.i_device, w.value(s.t)), 1e-4);
}

TEST(RunTransient, SolverErrorsCarryTimestamp) {
  const ModelParams p = table1_params();
  const Waveform w(SourceKind::Current, {{0.0, 1e-3, SegmentShape::Constant, 1e40, 1e40}});
  SolverOptions narrow;
  narrow.v_lo = -1;
  narrow.v_hi = 1;
  try {
    run_transient(w, p, 1e-4, 0.0, narrow);
    FAIL() << "expected BracketError";
  } catch (const BracketError& e) {
    EXPECT_NE(std::string(e.what()).find("t=0"), std::string::npos);
  }
  EXPECT_THROW(run_transient(w, p, 1e-4, 2.0), DomainError);
}

TEST(RunSweep, BelowThresholdIsOffBranch) {
  const ModelParams p = table1_params();
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e-12;
  s.stop = 1e-3;
  s.points = 40;
  s.spacing = SweepSpacing::Log;
  const SweepResult r = run_sweep_detailed(s, p, 0.0);
  for (const auto& pt : r.points) {
    EXPECT_FALSE(pt.triggered);
    EXPECT_EQ(pt.zeta, 0.0);
    EXPECT_EQ(pt.i_device, static_current(pt.v_device, 0.0, p));
  }
}

TEST(RunSweep, OffBranchPurityWithInfiniteThreshold) {
  ModelParams p = table1_params();
  p.v_th = std::numeric_limits<double>::infinity();
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e-9;
  s.stop = 1e7;
  s.points = 200;
  s.spacing = SweepSpacing::Log;
  const IVCurve c = run_sweep(s, p, 0.0);
  for (const auto& pt : c.points)
    EXPECT_LT(oracle::rel_err(pt.i, static_current(pt.v, 0.0, p)), 1e-12);
}

TEST(RunSweep, PinnedOnStateFollowsOnBranch) {
  ModelParams p = table1_params();
  p.v_th = -std::numeric_limits<double>::infinity();  // always triggered
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e-9;
  s.stop = 1e-3;
  s.points = 30;
  s.spacing = SweepSpacing::Log;
  const SweepResult r = run_sweep_detailed(s, p, zeta_on(p));
  for (const auto& pt : r.points) {
    EXPECT_EQ(pt.zeta, zeta_on(p));
    EXPECT_LT(oracle::rel_err(pt.i_device, static_current(pt.v_device, p.K * zeta_on(p), p)),
              1e-12);
  }
}

TEST(RunSweep, CurrentSweepSnapsBack) {
  const ModelParams p = table1_params();
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e-12;
  s.stop = 1e7;
  s.points = 400;
  s.spacing = SweepSpacing::Log;
  const IVCurve c = run_sweep(s, p, 0.0);
  bool ndr = false;
  for (std::size_t k = 1; k < c.size(); ++k)
    ndr |= c.points[k].i > c.points[k - 1].i && c.points[k].v < c.points[k - 1].v;
  EXPECT_TRUE(ndr);
}

TEST(RunSweep, CausalityOfState) {
  const ModelParams p = table1_params();
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e4;
  s.stop = 1e7;
  s.points = 300;
  s.dwell = 0.3 * tau(p);
  s.direction = SweepDirection::UpDown;
  s.spacing = SweepSpacing::Log;
  const SweepResult r = run_sweep_detailed(s, p, 0.0);
  double prev = 0.0;
  int on = 0;
  for (const auto& pt : r.points) {
    if (pt.v_trigger >= p.v_th) {
      EXPECT_GE(pt.zeta, prev);
      ++on;
    } else {
      EXPECT_LE(pt.zeta, prev);
    }
    prev = pt.zeta;
  }
  EXPECT_GT(on, 0);
}

TEST(RunSweep, VoltageSweepObeysLoadLine) {
  const ModelParams p = table1_params();
  SweepSpec s;
  s.mode = SweepMode::VoltageSweepWithRb;
  s.start = 0.0;
  s.stop = 5.0;
  s.points = 51;
  const SweepResult r = run_sweep_detailed(s, p, 0.0);
  // The solved voltage brackets the load-line root to within the solver tolerance.
  for (const auto& pt : r.points) {
    const double dz = state_derivative(pt.zeta, p, pt.triggered);
    auto g = [&](double v) { return v + p.Rb * total_current(v, pt.zeta, dz, p) - pt.drive; };
    EXPECT_LE(g(pt.v_device - 1e-6), 0.0) << pt.drive;
    EXPECT_GE(g(pt.v_device + 1e-6), 0.0) << pt.drive;
  }
}

TEST(RunSweep, Deterministic) {
  const ModelParams p = table1_params();
  SweepSpec s;
  s.mode = SweepMode::CurrentSweep;
  s.start = 1e-6;
  s.stop = 1e7;
  s.points = 100;
  s.spacing = SweepSpacing::Log;
  const IVCurve a = run_sweep(s, p, 0.0);
  const IVCurve b = run_sweep(s, p, 0.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(std::memcmp(&a.points[k], &b.points[k], sizeof(IVPoint)), 0);
  }
}
