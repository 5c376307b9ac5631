#include "ots/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ots/error.hpp"

namespace ots {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Rethrows a library error with extra location context, keeping its type.
template <typename F>
auto with_context(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const BracketError& e) {
    throw BracketError(std::string(e.what()) + " (" + where + ")");
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(e.what()) + " (" + where + ")");
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " (" + where + ")");
  }
}

void check_initial_state(double zeta0, const ModelParams& p) {
  if (!(zeta0 >= 0.0 && zeta0 <= zeta_on(p)))
    throw DomainError("zeta0 must lie in [0, I_state*R2]");
}

// Device voltage for a drive level at a given state.
double solve_device_voltage(SourceKind kind, double level, double zeta,
                            double dzeta_dt, const ModelParams& p,
                            const SolverOptions& opt) {
  if (kind == SourceKind::Current)
    return solve_v_for_current(level, zeta, dzeta_dt, p, opt.v_lo, opt.v_hi,
                               opt.tol, opt.max_iter);
  return solve_v_on_load_line(level, zeta, dzeta_dt, p, opt);
}

template <typename G>
double bisect_increasing(G&& g, double lo, double hi, double tol, int max_iter) {
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (!(g_lo <= 0.0 && g_hi >= 0.0))
    throw BracketError("root not enclosed in [" + fmt_double(lo) + ", " +
                       fmt_double(hi) + "]: residuals " + fmt_double(g_lo) +
                       ", " + fmt_double(g_hi));
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;  // bracket at machine precision
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (gm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw ConvergenceError("bisection did not converge in " +
                         std::to_string(max_iter) + " iterations; bracket [" +
                         fmt_double(lo) + ", " + fmt_double(hi) + "]");
}

}  // namespace

Waveform::Waveform(SourceKind kind, std::vector<Segment> segments)
    : kind_(kind), segments_(std::move(segments)) {
  if (segments_.empty()) throw DomainError("waveform needs at least one segment");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const Segment& s = segments_[k];
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) ||
        !std::isfinite(s.level_start) || !std::isfinite(s.level_end))
      throw DomainError("waveform segment " + std::to_string(k) +
                        " has non-finite values");
    if (!(s.t_end > s.t_start))
      throw DomainError("waveform segment " + std::to_string(k) +
                        " needs t_end > t_start");
    if (k > 0 && s.t_start != segments_[k - 1].t_end)
      throw DomainError("waveform segment " + std::to_string(k) +
                        " is not contiguous with its predecessor");
  }
}

double Waveform::value(double t) const noexcept {
  const Segment& first = segments_.front();
  if (t < first.t_start) return first.level_start;
  for (const Segment& s : segments_) {
    if (t >= s.t_end) continue;
    switch (s.shape) {
      case SegmentShape::Constant:
        return s.level_start;
      case SegmentShape::Ramp: {
        const double u = (t - s.t_start) / (s.t_end - s.t_start);
        return s.level_start + (s.level_end - s.level_start) * u;
      }
      case SegmentShape::Pulse:
        return s.level_end;
    }
  }
  const Segment& last = segments_.back();
  switch (last.shape) {
    case SegmentShape::Constant:
      return last.level_start;
    case SegmentShape::Ramp:
      return last.level_end;
    case SegmentShape::Pulse:
      return last.level_start;
  }
  return last.level_start;
}

void validate(const SweepSpec& s) {
  if (s.points < 2) throw DomainError("sweep needs at least 2 points");
  if (!(s.dwell > 0) || !std::isfinite(s.dwell))
    throw DomainError("sweep dwell must be > 0");
  if (!std::isfinite(s.start) || !std::isfinite(s.stop))
    throw DomainError("sweep start/stop must be finite");
  if (s.spacing == SweepSpacing::Log &&
      !((s.start > 0 && s.stop > 0) || (s.start < 0 && s.stop < 0)))
    throw DomainError("log sweep needs nonzero start/stop of the same sign");
}

std::vector<double> sweep_levels(const SweepSpec& s) {
  validate(s);
  std::vector<double> up(s.points);
  const double last = static_cast<double>(s.points - 1);
  for (std::size_t k = 0; k < s.points; ++k) {
    const double u = static_cast<double>(k) / last;
    if (s.spacing == SweepSpacing::Linear) {
      up[k] = s.start + (s.stop - s.start) * u;
    } else {
      const double sign = s.start > 0 ? 1.0 : -1.0;
      const double a = std::log10(std::abs(s.start));
      const double b = std::log10(std::abs(s.stop));
      up[k] = sign * std::pow(10.0, a + (b - a) * u);
    }
  }
  up.front() = s.start;
  up.back() = s.stop;
  switch (s.direction) {
    case SweepDirection::Up:
      return up;
    case SweepDirection::Down:
      std::reverse(up.begin(), up.end());
      return up;
    case SweepDirection::UpDown: {
      std::vector<double> out = up;
      out.insert(out.end(), up.rbegin() + 1, up.rend());
      return out;
    }
  }
  return up;
}

DeviceState step_state(const DeviceState& state, double v_device, double dt,
                       const ModelParams& p) {
  if (!(dt > 0)) throw DomainError("step size must be > 0");
  DeviceState next;
  next.triggered = v_device >= p.v_th;
  next.zeta = state_closed_form(dt, state.zeta, p, next.triggered);
  next.t = state.t + dt;
  return next;
}

double solve_v_for_current(double i_target, double zeta, double dzeta_dt,
                           const ModelParams& p, double v_lo, double v_hi,
                           double tol, int max_iter) {
  if (!(tol > 0)) throw DomainError("solver tolerance must be > 0");
  if (!(v_lo < v_hi)) throw DomainError("solver bracket needs v_lo < v_hi");
  if (!std::isfinite(i_target)) throw DomainError("target current must be finite");
  auto g = [&](double v) { return total_current(v, zeta, dzeta_dt, p) - i_target; };
  return bisect_increasing(g, v_lo, v_hi, tol, max_iter);
}

double solve_v_on_load_line(double v_src, double zeta, double dzeta_dt,
                            const ModelParams& p, const SolverOptions& opt) {
  if (p.Rb == 0.0) return v_src;
  if (!std::isfinite(v_src)) throw DomainError("source voltage must be finite");
  auto g = [&](double v) {
    return v + p.Rb * total_current(v, zeta, dzeta_dt, p) - v_src;
  };
  return bisect_increasing(g, opt.v_lo, opt.v_hi, opt.tol, opt.max_iter);
}

TransientResult run_transient(const Waveform& drive, const ModelParams& p,
                              double dt, double zeta0,
                              const SolverOptions& opt) {
  validate(p);
  if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  check_initial_state(zeta0, p);

  const double t0 = drive.t_begin();
  const double span = drive.t_end() - t0;
  const auto steps =
      static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));

  TransientResult out;
  out.samples.reserve(steps + 1);
  DeviceState state{zeta0, false, t0};
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double level = drive.value(t);
    with_context("t=" + fmt_double(t), [&] {
      // Trigger decision uses the step-start voltage under the previous
      // trigger; the sample is re-solved once if the trigger flips.
      const double rate_prev = state_derivative(state.zeta, p, state.triggered);
      const double v_pre = solve_device_voltage(drive.kind(), level, state.zeta,
                                                rate_prev, p, opt);
      const bool trig = v_pre >= p.v_th;
      const double rate = state_derivative(state.zeta, p, trig);
      const double v = trig == state.triggered
                           ? v_pre
                           : solve_device_voltage(drive.kind(), level,
                                                  state.zeta, rate, p, opt);
      out.samples.push_back(
          {t, v, total_current(v, state.zeta, rate, p), state.zeta, trig});
      if (k < steps) {
        state = step_state(state, v_pre, dt, p);
        state.t = t0 + static_cast<double>(k + 1) * dt;
      }
      return 0;
    });
  }
  return out;
}

SweepResult run_sweep_detailed(const SweepSpec& spec, const ModelParams& p,
                               double zeta0, const SolverOptions& opt) {
  validate(p);
  check_initial_state(zeta0, p);
  const std::vector<double> levels = sweep_levels(spec);
  const SourceKind kind = spec.mode == SweepMode::CurrentSweep
                              ? SourceKind::Current
                              : SourceKind::Voltage;

  SweepResult out;
  out.points.reserve(levels.size());
  DeviceState state{zeta0, false, 0.0};
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double level = levels[k];
    with_context("sweep index " + std::to_string(k), [&] {
      const double rate_prev = state_derivative(state.zeta, p, state.triggered);
      const double v_pre =
          solve_device_voltage(kind, level, state.zeta, rate_prev, p, opt);
      state = step_state(state, v_pre, spec.dwell, p);
      const double rate = state_derivative(state.zeta, p, state.triggered);
      const double v = solve_device_voltage(kind, level, state.zeta, rate, p, opt);
      out.points.push_back({level, v, total_current(v, state.zeta, rate, p),
                            state.zeta, state.triggered, v_pre});
      return 0;
    });
  }
  return out;
}

IVCurve SweepResult::curve(std::string source) const {
  IVCurve c;
  c.points.reserve(points.size());
  for (const SweepPoint& pt : points) c.points.push_back({pt.v_device, pt.i_device});
  c.meta.source = std::move(source);
  return c;
}

IVCurve run_sweep(const SweepSpec& spec, const ModelParams& p, double zeta0,
                  const SolverOptions& opt) {
  IVCurve c = run_sweep_detailed(spec, p, zeta0, opt).curve("sweep");
  switch (spec.direction) {
    case SweepDirection::Up:
      c.meta.sweep_direction = "up";
      break;
    case SweepDirection::Down:
      c.meta.sweep_direction = "down";
      break;
    case SweepDirection::UpDown:
      c.meta.sweep_direction = "up_down";
      break;
  }
  return c;
}

}  // namespace ots
