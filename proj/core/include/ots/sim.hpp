#pragma once

// Time integration of the delay state and quasi-static i-v sweeps.

#include <cstddef>
#include <vector>

#include "ots/iv_curve.hpp"
#include "ots/model.hpp"

namespace ots {

enum class SourceKind { Voltage, Current };

enum class SegmentShape { Constant, Ramp, Pulse };

// One piece of a drive signal on [t_start, t_end).
//   Constant: level_start throughout.
//   Ramp:     linear from level_start to level_end.
//   Pulse:    level_end inside the segment, level_start outside it
//             (so a trailing pulse returns to its base level).
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  SegmentShape shape = SegmentShape::Constant;
  double level_start = 0.0;
  double level_end = 0.0;
};

class Waveform {
 public:
  Waveform(SourceKind kind, std::vector<Segment> segments);

  SourceKind kind() const noexcept { return kind_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double t_begin() const noexcept { return segments_.front().t_start; }
  double t_end() const noexcept { return segments_.back().t_end; }

  // Drive level at time t. Before the first segment the waveform holds the
  // first segment's starting level; after the last it holds the final level.
  double value(double t) const noexcept;

 private:
  SourceKind kind_;
  std::vector<Segment> segments_;
};

enum class SweepMode { CurrentSweep, VoltageSweepWithRb };
enum class SweepDirection { Up, Down, UpDown };
enum class SweepSpacing { Linear, Log };

struct SweepSpec {
  SweepMode mode = SweepMode::CurrentSweep;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 2;
  double dwell = 0.1;  // 10 tau for the reference device
  SweepDirection direction = SweepDirection::Up;
  SweepSpacing spacing = SweepSpacing::Linear;
};

void validate(const SweepSpec& s);

// Drive levels in sweep order (Down reverses, UpDown appends the reverse
// without repeating the turning point).
std::vector<double> sweep_levels(const SweepSpec& s);

// Bisection settings for every scalar voltage solve.
struct SolverOptions {
  double v_lo = -10.0;
  double v_hi = 10.0;
  double tol = 1e-6;
  int max_iter = 200;
};

struct TransientSample {
  double t = 0.0;
  double v_device = 0.0;
  double i_device = 0.0;
  double zeta = 0.0;
  bool triggered = false;
};

struct TransientResult {
  std::vector<TransientSample> samples;
};

// Per-point record of a sweep. `v_trigger` is the step-start device voltage
// the trigger decision was made on.
struct SweepPoint {
  double drive = 0.0;
  double v_device = 0.0;
  double i_device = 0.0;
  double zeta = 0.0;
  bool triggered = false;
  double v_trigger = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;

  IVCurve curve(std::string source = "sweep") const;
};

// Advance by dt with the trigger set from v_device >= v_th. Exact for the
// linear state equation, so two steps compose into one.
DeviceState step_state(const DeviceState& state, double v_device, double dt,
                       const ModelParams& p);

// Voltage v in [v_lo, v_hi] with total_current(v, zeta, dzeta_dt) == i_target,
// found by bisection to a bracket narrower than tol.
double solve_v_for_current(double i_target, double zeta, double dzeta_dt,
                           const ModelParams& p, double v_lo, double v_hi,
                           double tol, int max_iter = 200);

// Device voltage on the load line v_src = v + i(v)*Rb.
double solve_v_on_load_line(double v_src, double zeta, double dzeta_dt,
                            const ModelParams& p, const SolverOptions& opt = {});

TransientResult run_transient(const Waveform& drive, const ModelParams& p,
                              double dt, double zeta0,
                              const SolverOptions& opt = {});

SweepResult run_sweep_detailed(const SweepSpec& spec, const ModelParams& p,
                               double zeta0, const SolverOptions& opt = {});

IVCurve run_sweep(const SweepSpec& spec, const ModelParams& p, double zeta0,
                  const SolverOptions& opt = {});

}  // namespace ots
