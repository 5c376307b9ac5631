#pragma once

// Least-squares extraction of model parameters from steady-state i-v data.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ots/iv_curve.hpp"
#include "ots/model.hpp"

namespace ots {

// Data normalization: the model is compared at s_v*v against s_i*i.
struct Scales {
  double s_i = 1.0;
  double s_v = 1.0;

  friend bool operator==(const Scales&, const Scales&) = default;
};

enum class LossSpace { LogCurrent, LinearCurrent };

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct FitConfig {
  // Names of ModelParams fields plus "s_i" / "s_v".
  std::vector<std::string> free_params;
  // Missing entries fall back to default_bounds() around the initial value.
  std::map<std::string, Bounds> bounds;
  LossSpace loss_space = LossSpace::LogCurrent;
  int max_evals = 4000;
  std::uint64_t seed = 0;
  // Extra simplex runs from random starts, in addition to the initial point.
  int restarts = 0;
  Scales initial_scales;
  // Permits fitting Is and s_i together in log space (flat direction).
  bool allow_degenerate_scales = false;
  double xtol = 1e-8;
  double ftol = 1e-12;

  friend bool operator==(const FitConfig&, const FitConfig&) = default;
};

struct FitResult {
  ModelParams params;
  Scales scales;
  double rss = 0.0;
  int n_evals = 0;
  bool converged = false;
  std::vector<double> per_point_residuals;
  // Diagnostics: which restart produced the result and its start rss.
  int best_restart = 0;
  double initial_rss = 0.0;
};

// Every name accepted in FitConfig::free_params.
const std::vector<std::string>& fittable_parameter_names();

// True for parameters searched on a log10 scale.
bool is_log_scaled(const std::string& name);

double get_parameter(const ModelParams& p, const Scales& s, const std::string& name);
void set_parameter(ModelParams& p, Scales& s, const std::string& name, double value);

// Default search box: x/100..x*100 for multiplicative
// parameters, 0.5x..1.5x for linear ones (alpha_R capped at 1).
Bounds default_bounds(const std::string& name, double initial);

// Validates names, bounds and the identifiability guard. Returns the
// config with every free parameter's bounds filled in.
FitConfig resolve_config(const FitConfig& config, const ModelParams& initial);

// Index of the first point whose scaled voltage reaches v_th, or size().
std::size_t threshold_crossing(const IVCurve& curve, double s_v, double v_th);

// Steady-state model current at every point: zeta = 0 before the first
// threshold crossing, zeta = I_state*R2 from it on.
std::vector<double> branch_currents(const IVCurve& curve, const ModelParams& p,
                                    double s_v = 1.0);

// Per-point model-minus-data residual in log10 or linear current.
std::vector<double> residuals(const IVCurve& measured, const ModelParams& p,
                              const Scales& scales, LossSpace loss);

double sum_of_squares(std::span<const double> r);

FitResult fit(const IVCurve& measured, const FitConfig& config,
              const ModelParams& initial);

// Branch-aware steady-state curve on a sorted grid with multiplicative
// log-normal noise exp(sigma*z), z ~ N(0,1). Deterministic per seed.
IVCurve synth_curve(const ModelParams& p, std::span<const double> v_grid,
                    double noise_sigma, std::uint64_t seed);

}  // namespace ots
