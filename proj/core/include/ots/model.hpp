#pragma once

// Compact delay model of an Ovonic Threshold Switch.
//
// Everything here is a pure function of its arguments. Quantities are SI:
// volts, amperes, ohms, farads, seconds. The internal state `zeta` is a
// voltage bounded by [0, I_state * R2].

#include <optional>
#include <span>
#include <vector>

namespace ots {

// Exponent argument above which exp() saturates instead of overflowing.
inline constexpr double kExpCap = 700.0;

// Relative guard below the junction built-in potential for Cj.
inline constexpr double kCapSingularityEps = 1e-9;

struct JunctionCapacitanceParams {
  double Cj0 = 0.0;  // zero-bias capacitance (F)
  double vj = 0.0;   // built-in potential (V)
  double M = 0.0;    // grading coefficient

  friend bool operator==(const JunctionCapacitanceParams&,
                         const JunctionCapacitanceParams&) = default;
};

struct DiffusionCapacitanceParams {
  // Transit times for J1, J2, J3 (at most three entries).
  std::vector<double> tau_j;

  friend bool operator==(const DiffusionCapacitanceParams&,
                         const DiffusionCapacitanceParams&) = default;
};

struct ModelParams {
  double Is = 1e-14;
  double beta_F = 250.0;
  double alpha_R = 1.0;
  double V_T = 25.9e-3;
  double K = 0.7;
  double I_state = 1e-6;
  double R2 = 1e6;
  double C2 = 10e-9;
  double C = 10e-9;
  double v_th = 2.4;
  double i_th = 1e-6;
  double Rb = 5e3;
  std::optional<JunctionCapacitanceParams> cap_junction;
  std::optional<DiffusionCapacitanceParams> cap_diffusion;
  // Use Cj + Cd instead of the linear C in the capacitive term.
  bool nonlinear_cap = false;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// The fitted values of the reference device.
ModelParams table1_params();

// Throws DomainError naming the first violated invariant.
void validate(const ModelParams& p);

// Delay time constant R2*C2.
inline double tau(const ModelParams& p) { return p.R2 * p.C2; }

// Fully-on state value I_state*R2.
inline double zeta_on(const ModelParams& p) { return p.I_state * p.R2; }

struct DeviceState {
  double zeta = 0.0;
  bool triggered = false;
  double t = 0.0;

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

struct JunctionVoltages {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double vs = 0.0;
  double vp = 0.0;
};

// exp(x) with the argument clamped to kExpCap.
double exp_saturated(double x) noexcept;

double alpha_from_beta(double beta);

// Diode current (Is/alpha)*(exp(vJ/V_T) - 1), alpha = beta/(1+beta).
double junction_current(double vJ, double Is, double beta, double V_T);

// Schottky depletion capacitance Cj0 / (1 - vc/vj)^M.
double junction_capacitance(double vc, double Cj0, double vj, double M);

// Sum of tau_j * I_j / V_T.
double diffusion_capacitance(std::span<const double> currents,
                             std::span<const double> taus, double V_T);

// Exact solution of C2*dzeta/dt = I_src - zeta/R2 after time t.
double state_closed_form(double t, double zeta0, const ModelParams& p,
                         bool triggered);

// dzeta/dt in V/s.
double state_derivative(double zeta, const ModelParams& p, bool triggered);

inline double internal_voltage(double zeta, double K) { return K * zeta; }

JunctionVoltages partition_voltages(double v, double vR);

// DC current through the static branches, f(v) with vR = K*zeta.
double static_current(double v, double vR, const ModelParams& p);

// dq/dt of the main branch: -C * dvR/dt.
double capacitive_current(double dvR_dt, double C);

// Capacitance seen by the main branch at (v, vR). Returns p.C unless
// p.nonlinear_cap is set.
double effective_capacitance(double v, double vR, const ModelParams& p);

// Device current i = f(v) + dq/dt at state zeta and rate dzeta/dt.
double total_current(double v, double zeta, double dzeta_dt,
                     const ModelParams& p);

}  // namespace ots
