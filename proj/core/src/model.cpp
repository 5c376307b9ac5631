#include "ots/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ots/error.hpp"

namespace ots {

namespace {

double expm1_saturated(double x) noexcept {
  return std::expm1(std::min(x, kExpCap));
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

ModelParams table1_params() { return ModelParams{}; }

void validate(const ModelParams& p) {
  require(std::isfinite(p.Is) && p.Is > 0, "Is must be > 0");
  require(std::isfinite(p.beta_F) && p.beta_F > 0, "beta_F must be > 0");
  require(p.alpha_R > 0 && p.alpha_R <= 1, "alpha_R must be in (0, 1]");
  require(std::isfinite(p.V_T) && p.V_T > 0, "V_T must be > 0");
  require(std::isfinite(p.K) && p.K > 0, "K must be > 0");
  require(std::isfinite(p.I_state) && p.I_state >= 0, "I_state must be >= 0");
  require(std::isfinite(p.R2) && p.R2 > 0, "R2 must be > 0");
  require(std::isfinite(p.C2) && p.C2 > 0, "C2 must be > 0");
  require(std::isfinite(p.C) && p.C >= 0, "C must be >= 0");
  // +/-inf thresholds are allowed: never / always triggered.
  require(!std::isnan(p.v_th), "v_th must not be NaN");
  require(std::isfinite(p.i_th), "i_th must be finite");
  require(std::isfinite(p.Rb) && p.Rb >= 0, "Rb must be >= 0");
  if (p.cap_junction) {
    const auto& cj = *p.cap_junction;
    require(std::isfinite(cj.Cj0) && cj.Cj0 > 0, "cap_junction.Cj0 must be > 0");
    require(std::isfinite(cj.vj) && cj.vj > 0, "cap_junction.vj must be > 0");
    require(std::isfinite(cj.M) && cj.M > 0, "cap_junction.M must be > 0");
  }
  if (p.cap_diffusion) {
    const auto& taus = p.cap_diffusion->tau_j;
    require(taus.size() <= 3, "cap_diffusion.tau_j has at most 3 entries");
    for (double t : taus)
      require(std::isfinite(t) && t >= 0, "cap_diffusion.tau_j must be >= 0");
  }
  require(!p.nonlinear_cap || p.cap_junction || p.cap_diffusion,
          "nonlinear_cap requires cap_junction or cap_diffusion");
}

double exp_saturated(double x) noexcept { return std::exp(std::min(x, kExpCap)); }

double alpha_from_beta(double beta) {
  if (!(beta > 0)) throw DomainError("beta must be > 0");
  if (std::isinf(beta)) return 1.0;
  return beta / (1.0 + beta);
}

double junction_current(double vJ, double Is, double beta, double V_T) {
  if (!(Is > 0)) throw DomainError("Is must be > 0");
  if (!(V_T > 0)) throw DomainError("V_T must be > 0");
  const double alpha = alpha_from_beta(beta);
  return Is / alpha * expm1_saturated(vJ / V_T);
}

double junction_capacitance(double vc, double Cj0, double vj, double M) {
  if (!(Cj0 > 0)) throw DomainError("Cj0 must be > 0");
  if (!(vj > 0)) throw DomainError("vj must be > 0");
  if (!(vc < vj * (1.0 - kCapSingularityEps)))
    throw DomainError("junction capacitance undefined for vc >= vj");
  return Cj0 / std::pow(1.0 - vc / vj, M);
}

double diffusion_capacitance(std::span<const double> currents,
                             std::span<const double> taus, double V_T) {
  if (currents.size() != taus.size())
    throw DomainError("diffusion capacitance: current/tau length mismatch");
  if (!(V_T > 0)) throw DomainError("V_T must be > 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k) sum += taus[k] * currents[k] / V_T;
  return sum;
}

double state_closed_form(double t, double zeta0, const ModelParams& p,
                         bool triggered) {
  if (!(t >= 0)) throw DomainError("state time must be >= 0");
  const double target = triggered ? zeta_on(p) : 0.0;
  // zeta0*e^{-t/tau} + target*(1 - e^{-t/tau}). Both terms are >= 0, so no
  // cancellation on long decays; expm1 keeps short steps exact.
  const double x = t / tau(p);
  const double z = zeta0 * std::exp(-x) + target * -std::expm1(-x);
  return std::clamp(z, std::min(zeta0, target), std::max(zeta0, target));
}

double state_derivative(double zeta, const ModelParams& p, bool triggered) {
  const double target = triggered ? zeta_on(p) : 0.0;
  return (target - zeta) / tau(p);
}

JunctionVoltages partition_voltages(double v, double vR) {
  JunctionVoltages j;
  j.v1 = (v + vR) / 2.0;
  j.v3 = j.v1;
  j.v2 = -vR;
  j.vs = 0.0;
  j.vp = -v;
  return j;
}

double static_current(double v, double vR, const ModelParams& p) {
  // Is*[(1+1/bF)e^a - e^b - 1/bF] regrouped as Is*[(e^a - e^b) + (e^a-1)/bF]
  // so that v = vR = 0 cancels exactly.
  const double a = expm1_saturated((v + vR) / (2.0 * p.V_T));
  const double b = expm1_saturated(-vR / p.V_T);
  const double c = expm1_saturated(-v / p.V_T);
  return p.Is * ((a - b) + a / p.beta_F) - p.Is / p.alpha_R * c;
}

double capacitive_current(double dvR_dt, double C) {
  if (!(C >= 0)) throw DomainError("C must be >= 0");
  return -C * dvR_dt;
}

double effective_capacitance(double v, double vR, const ModelParams& p) {
  if (!p.nonlinear_cap) return p.C;
  const JunctionVoltages j = partition_voltages(v, vR);
  double c = 0.0;
  if (p.cap_junction) {
    const auto& cj = *p.cap_junction;
    c += junction_capacitance(j.v2, cj.Cj0, cj.vj, cj.M);
  }
  if (p.cap_diffusion && !p.cap_diffusion->tau_j.empty()) {
    const double i1 = junction_current(j.v1, p.Is, p.beta_F, p.V_T);
    const double i2 = p.Is / p.alpha_R * expm1_saturated(j.v2 / p.V_T);
    const double i3 = junction_current(j.v3, p.Is, p.beta_F, p.V_T);
    const double currents[3] = {i1, i2, i3};
    const auto& taus = p.cap_diffusion->tau_j;
    c += diffusion_capacitance(std::span(currents, taus.size()), taus, p.V_T);
  }
  return c;
}

double total_current(double v, double zeta, double dzeta_dt,
                     const ModelParams& p) {
  const double vR = internal_voltage(zeta, p.K);
  const double dvR_dt = internal_voltage(dzeta_dt, p.K);
  return static_current(v, vR, p) +
         capacitive_current(dvR_dt, effective_capacitance(v, vR, p));
}

}  // namespace ots
