#pragma once

// File formats: *.iv.csv curves, *.run.json configurations, SVG plots.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ots/fit.hpp"
#include "ots/iv_curve.hpp"
#include "ots/model.hpp"
#include "ots/netlist.hpp"
#include "ots/sim.hpp"

namespace ots {

// ---- CSV -----------------------------------------------------------------

// Header row must contain `v` and `i` columns; other columns are ignored.
// `#` lines are comments; `# source:`, `# normalized:` and
// `# sweep_direction:` comments before the header fill the curve metadata.
IVCurve parse_iv_csv(std::string_view text);

// 17 significant digits, so parse_iv_csv(write_curve_csv(c)) == c.
std::string write_curve_csv(const IVCurve& curve);

std::string write_transient_csv(const TransientResult& result);

// ---- configuration -------------------------------------------------------

struct TransientSpec {
  Waveform drive{SourceKind::Voltage, {Segment{0.0, 1.0}}};
  double dt = 1e-4;
  double zeta0 = 0.0;
};

struct SweepRun {
  SweepSpec spec;
  double zeta0 = 0.0;
};

struct RunConfig {
  ModelParams params;
  SolverOptions solver;
  NetlistOptions netlist;
  std::optional<SweepRun> sweep;
  std::optional<TransientSpec> transient;
  std::optional<FitConfig> fit;
};

// Parses and validates a run file. Unknown keys, wrong types and
// ModelParams invariant violations raise ConfigError with a JSON pointer.
RunConfig load_config(std::string_view text);

// Same, from an already-parsed document (after overrides).
RunConfig config_from_json(const nlohmann::json& doc);

// Applies `path=value` to a parsed config. `path` is dotted
// (`sweep.points`); a bare name addresses `params.<name>`. The value is
// read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

nlohmann::ordered_json params_to_json(const ModelParams& p);
nlohmann::ordered_json fit_result_to_json(const FitResult& r);

// ---- plots ---------------------------------------------------------------

struct PlotOptions {
  bool log_y = true;
  // One per curve; missing entries fall back to the curve's meta.source.
  std::vector<std::string> labels;
  std::string title;
  std::string x_label = "v (V)";
  std::string y_label = "i (A)";
  int width = 640;
  int height = 480;
};

// Self-contained SVG 1.1 with axes, ticks, a legend and one polyline per
// curve. Byte-identical for identical input.
std::string render_svg_plot(const std::vector<IVCurve>& curves,
                            const PlotOptions& options = {});

}  // namespace ots
