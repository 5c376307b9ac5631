#include "ots/fit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "ots/error.hpp"
#include "ots/simplex.hpp"
#include "random.hpp"

namespace ots {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Keeps logit() finite for starts sitting exactly on a bound.
constexpr double kEdgeFraction = 1e-9;

struct ParamInfo {
  const char* name;
  bool log_scaled;
  double ModelParams::*field;  // nullptr for the data scales
};

const ParamInfo kParams[] = {
    {"Is", true, &ModelParams::Is},
    {"beta_F", true, &ModelParams::beta_F},
    {"alpha_R", false, &ModelParams::alpha_R},
    {"V_T", false, &ModelParams::V_T},
    {"K", false, &ModelParams::K},
    {"I_state", true, &ModelParams::I_state},
    {"R2", true, &ModelParams::R2},
    {"C2", true, &ModelParams::C2},
    {"C", true, &ModelParams::C},
    {"v_th", false, &ModelParams::v_th},
    {"i_th", true, &ModelParams::i_th},
    {"Rb", true, &ModelParams::Rb},
    {"s_i", true, nullptr},
    {"s_v", false, nullptr},
};

const ParamInfo& info(const std::string& name) {
  for (const ParamInfo& p : kParams)
    if (name == p.name) return p;
  throw FitError("unknown fit parameter '" + name + "'");
}

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double f) {
  f = std::clamp(f, kEdgeFraction, 1.0 - kEdgeFraction);
  return std::log(f / (1.0 - f));
}

// Maps between a bounded parameter and an unconstrained coordinate.
struct Transform {
  std::string name;
  Bounds b;
  bool log_scaled = false;

  double to_value(double u) const {
    const double f = logistic(u);
    double x;
    if (log_scaled) {
      const double lo = std::log10(b.lo), hi = std::log10(b.hi);
      x = std::pow(10.0, lo + (hi - lo) * f);
    } else {
      x = b.lo + (b.hi - b.lo) * f;
    }
    return std::clamp(x, b.lo, b.hi);
  }

  double to_internal(double x) const {
    if (log_scaled) {
      const double lo = std::log10(b.lo), hi = std::log10(b.hi);
      return logit((std::log10(x) - lo) / (hi - lo));
    }
    return logit((x - b.lo) / (b.hi - b.lo));
  }
};

std::string join_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(idx.size(), 10);
  for (std::size_t k = 0; k < shown; ++k) os << (k ? ", " : "") << idx[k];
  if (idx.size() > shown) os << ", ... (" << idx.size() << " total)";
  return os.str();
}

struct Candidate {
  ModelParams params;
  Scales scales;
  double rss = kInf;
  int n_evals = 0;
  bool converged = false;
};

}  // namespace

const std::vector<std::string>& fittable_parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const ParamInfo& p : kParams) out.emplace_back(p.name);
    return out;
  }();
  return names;
}

bool is_log_scaled(const std::string& name) { return info(name).log_scaled; }

double get_parameter(const ModelParams& p, const Scales& s, const std::string& name) {
  const ParamInfo& pi = info(name);
  if (pi.field) return p.*pi.field;
  return name == "s_i" ? s.s_i : s.s_v;
}

void set_parameter(ModelParams& p, Scales& s, const std::string& name, double value) {
  const ParamInfo& pi = info(name);
  if (pi.field)
    p.*pi.field = value;
  else if (name == "s_i")
    s.s_i = value;
  else
    s.s_v = value;
}

Bounds default_bounds(const std::string& name, double initial) {
  if (is_log_scaled(name)) {
    if (!(initial > 0))
      throw FitError("no default bounds for '" + name + "' at non-positive value");
    return {initial / 100.0, initial * 100.0};
  }
  Bounds b{std::min(0.5 * initial, 1.5 * initial), std::max(0.5 * initial, 1.5 * initial)};
  if (name == "alpha_R") b.hi = std::min(b.hi, 1.0);
  if (!(b.lo < b.hi))
    throw FitError("no default bounds for '" + name + "' at value 0");
  return b;
}

FitConfig resolve_config(const FitConfig& config, const ModelParams& initial) {
  FitConfig out = config;
  if (config.free_params.empty()) throw FitError("no free parameters");
  if (config.max_evals < 1) throw FitError("max_evals must be >= 1");
  if (config.restarts < 0) throw FitError("restarts must be >= 0");

  std::set<std::string> seen;
  for (const std::string& name : config.free_params) {
    info(name);
    if (!seen.insert(name).second)
      throw FitError("fit parameter '" + name + "' listed twice");
  }
  for (const auto& [name, b] : config.bounds) {
    info(name);
    if (!seen.count(name))
      throw FitError("bounds given for '" + name + "' which is not free");
  }
  if (config.loss_space == LossSpace::LogCurrent && seen.count("Is") &&
      seen.count("s_i") && !config.allow_degenerate_scales)
    throw FitError(
        "Is and s_i are not separately identifiable in log space; fix one or "
        "set allow_degenerate_scales");

  for (const std::string& name : config.free_params) {
    const double x0 = get_parameter(initial, config.initial_scales, name);
    auto it = out.bounds.find(name);
    Bounds b = it != out.bounds.end() ? it->second : default_bounds(name, x0);
    if (!(b.lo < b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi))
      throw FitError("bounds for '" + name + "' need finite lo < hi");
    if (is_log_scaled(name) && !(b.lo > 0))
      throw FitError("bounds for '" + name + "' must be positive");
    if (!(x0 >= b.lo && x0 <= b.hi))
      throw FitError("initial value of '" + name + "' lies outside its bounds");
    out.bounds[name] = b;
  }
  return out;
}

std::size_t threshold_crossing(const IVCurve& curve, double s_v, double v_th) {
  for (std::size_t k = 0; k < curve.size(); ++k)
    if (s_v * curve.points[k].v >= v_th) return k;
  return curve.size();
}

std::vector<double> branch_currents(const IVCurve& curve, const ModelParams& p,
                                    double s_v) {
  const std::size_t cross = threshold_crossing(curve, s_v, p.v_th);
  std::vector<double> out(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double zeta = k < cross ? 0.0 : zeta_on(p);
    out[k] = total_current(s_v * curve.points[k].v, zeta, 0.0, p);
  }
  return out;
}

std::vector<double> residuals(const IVCurve& measured, const ModelParams& p,
                              const Scales& scales, LossSpace loss) {
  if (measured.empty()) throw FitError("measured curve is empty");
  const std::vector<double> model = branch_currents(measured, p, scales.s_v);
  std::vector<double> r(measured.size());
  if (loss == LossSpace::LinearCurrent) {
    for (std::size_t k = 0; k < r.size(); ++k)
      r[k] = model[k] - scales.s_i * measured.points[k].i;
    return r;
  }
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double data = scales.s_i * measured.points[k].i;
    if (!(model[k] > 0) || !(data > 0)) {
      bad.push_back(k);
      continue;
    }
    r[k] = std::log10(model[k]) - std::log10(data);
  }
  if (!bad.empty())
    throw FitError("non-positive current in log space at points " + join_indices(bad));
  return r;
}

double sum_of_squares(std::span<const double> r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

FitResult fit(const IVCurve& measured, const FitConfig& config,
              const ModelParams& initial) {
  if (measured.size() < 2) throw FitError("fit needs at least 2 points");
  validate(initial);
  const FitConfig cfg = resolve_config(config, initial);

  std::vector<Transform> tr;
  for (const std::string& name : cfg.free_params)
    tr.push_back({name, cfg.bounds.at(name), is_log_scaled(name)});

  auto decode = [&](const std::vector<double>& u, ModelParams& p, Scales& s) {
    p = initial;
    s = cfg.initial_scales;
    for (std::size_t j = 0; j < tr.size(); ++j)
      set_parameter(p, s, tr[j].name, tr[j].to_value(u[j]));
  };
  auto objective_at = [&](const ModelParams& p, const Scales& s) {
    try {
      validate(p);
      return sum_of_squares(residuals(measured, p, s, cfg.loss_space));
    } catch (const Error&) {
      return kInf;
    }
  };
  auto objective = [&](const std::vector<double>& u) {
    ModelParams p;
    Scales s;
    decode(u, p, s);
    return objective_at(p, s);
  };

  SimplexOptions sopt;
  sopt.max_evals = cfg.max_evals;
  sopt.xtol = cfg.xtol;
  sopt.ftol = cfg.ftol;

  const int runs = 1 + cfg.restarts;
  std::vector<std::vector<double>> starts(runs);
  for (std::size_t j = 0; j < tr.size(); ++j)
    starts[0].push_back(
        tr[j].to_internal(get_parameter(initial, cfg.initial_scales, tr[j].name)));
  for (int r = 1; r < runs; ++r) {
    detail::Rng rng(detail::stream_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    for (std::size_t j = 0; j < tr.size(); ++j)
      starts[r].push_back(logit(0.05 + 0.9 * rng.uniform()));
  }

  // Restarts are independent; results are combined in index order below.
  std::vector<std::future<Candidate>> jobs;
  for (int r = 0; r < runs; ++r) {
    jobs.push_back(std::async(std::launch::async, [&, r] {
      const SimplexResult sr = nelder_mead(objective, starts[r], sopt);
      Candidate c;
      decode(sr.x, c.params, c.scales);
      c.rss = sr.f;
      c.n_evals = sr.n_evals;
      c.converged = sr.converged;
      return c;
    }));
  }

  Candidate best;
  int best_index = -1;
  int total_evals = 0;
  for (int r = 0; r < runs; ++r) {
    Candidate c = jobs[r].get();
    total_evals += c.n_evals;
    if (best_index < 0 || c.rss < best.rss) {
      best = std::move(c);
      best_index = r;
    }
  }

  const double initial_rss = objective_at(initial, cfg.initial_scales);
  ++total_evals;
  if (initial_rss <= best.rss && std::isfinite(initial_rss)) {
    // The simplex reached the start only through the logistic round trip;
    // the exact initial point is at least as good.
    best.params = initial;
    best.scales = cfg.initial_scales;
    best.rss = initial_rss;
  }
  if (!std::isfinite(best.rss))
    throw FitError("every objective evaluation failed (see residual errors)");

  FitResult out;
  out.params = best.params;
  out.scales = best.scales;
  out.rss = best.rss;
  out.n_evals = total_evals;
  out.converged = best.converged;
  out.per_point_residuals = residuals(measured, best.params, best.scales, cfg.loss_space);
  out.best_restart = best_index;
  out.initial_rss = initial_rss;
  return out;
}

IVCurve synth_curve(const ModelParams& p, std::span<const double> v_grid,
                    double noise_sigma, std::uint64_t seed) {
  validate(p);
  if (!(noise_sigma >= 0) || !std::isfinite(noise_sigma))
    throw FitError("noise_sigma must be >= 0");
  if (!std::is_sorted(v_grid.begin(), v_grid.end()))
    throw FitError("voltage grid must be sorted");

  IVCurve c;
  c.meta.source = "synthetic";
  c.points.reserve(v_grid.size());
  for (double v : v_grid) c.points.push_back({v, 0.0});
  const std::vector<double> clean = branch_currents(c, p);
  detail::Rng rng(detail::stream_seed(seed, 0));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double z = rng.normal();
    c.points[k].i = noise_sigma > 0 ? clean[k] * std::exp(noise_sigma * z) : clean[k];
  }
  return c;
}

}  // namespace ots
