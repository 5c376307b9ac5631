#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "ots/error.hpp"
#include "ots/fit.hpp"
#include "ots/io.hpp"
#include "ots/netlist.hpp"
#include "ots/sim.hpp"

namespace ots::cli {

namespace {

namespace fs = std::filesystem;

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("OTS_LOG");
  if (!env) return LogLevel::Info;
  const std::string v = env;
  if (v == "error") return LogLevel::Error;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

constexpr const char* kSchemaHelp = R"(run file (*.run.json), SI units throughout:
  {
    "params":    {"Is", "beta_F", "alpha_R", "V_T", "K", "I_state", "R2", "C2",
                  "C", "v_th", "i_th", "Rb",
                  optional "cap_junction": {"Cj0", "vj", "M"},
                  optional "cap_diffusion": {"tau_j": [..]}, optional "nonlinear_cap"},
    optional "solver":  {"v_lo", "v_hi", "tol", "max_iter"},
    optional "netlist": {"subckt_name", "include_delay_circuit", "anode", "cathode"},
    at most one of:
    "sweep":     {"mode": "current_sweep"|"voltage_sweep_with_Rb", "start", "stop",
                  "points", optional "dwell", "direction": "up"|"down"|"up_down",
                  "spacing": "linear"|"log", "zeta0"},
    "transient": {"waveform": {"kind": "voltage_source"|"current_source",
                  "segments": [{"t_start", "t_end", "shape": "constant"|"ramp"|"pulse",
                                "level_start", "level_end"}]}, "dt", "zeta0"},
    "fit":       {"free": [names], "bounds": {name: [lo, hi]},
                  "loss_space": "log_current"|"linear_current", "max_evals", "seed",
                  "restarts", "initial_scales": {"s_i", "s_v"}, "allow_degenerate_scales"}
  }
)";

// Reported as exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cli", "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("cli", "failed writing '" + path.string() + "'");
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  LogLevel level;
  fs::path out_dir;

  void info(const std::string& msg) const {
    if (level >= LogLevel::Info) err << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level >= LogLevel::Debug) err << msg << '\n';
  }
  fs::path emit(const std::string& name, const std::string& content) const {
    const fs::path p = out_dir / name;
    write_file(p, content);
    info("wrote " + p.string());
    return p;
  }
};

RunConfig load_run(const std::string& path, const std::vector<std::string>& overrides) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

bool all_positive(const IVCurve& c) {
  for (const IVPoint& p : c.points)
    if (!(p.i > 0)) return false;
  return true;
}

void cmd_sweep(const Context& ctx, const RunConfig& cfg, bool plot) {
  if (!cfg.sweep) throw ConfigError("/sweep", "the sweep command needs a sweep block");
  const IVCurve curve = run_sweep(cfg.sweep->spec, cfg.params, cfg.sweep->zeta0, cfg.solver);
  ctx.emit("curve.iv.csv", write_curve_csv(curve));
  if (plot) {
    PlotOptions po;
    po.log_y = all_positive(curve);
    po.labels = {"model"};
    ctx.emit("curve.svg", render_svg_plot({curve}, po));
  }
}

void cmd_transient(const Context& ctx, const RunConfig& cfg, bool plot) {
  if (!cfg.transient)
    throw ConfigError("/transient", "the transient command needs a transient block");
  const TransientSpec& t = *cfg.transient;
  const TransientResult r = run_transient(t.drive, cfg.params, t.dt, t.zeta0, cfg.solver);
  ctx.emit("transient.csv", write_transient_csv(r));
  if (plot) {
    IVCurve locus;
    locus.meta.source = "transient";
    for (const TransientSample& s : r.samples) locus.points.push_back({s.v_device, s.i_device});
    PlotOptions po;
    po.log_y = all_positive(locus);
    ctx.emit("transient.svg", render_svg_plot({locus}, po));
  }
}

void cmd_fit(const Context& ctx, const std::string& data_path, const RunConfig& cfg,
             std::optional<std::uint64_t> seed) {
  if (!cfg.fit) throw ConfigError("/fit", "the fit command needs a fit block");
  FitConfig fc = *cfg.fit;
  if (seed) fc.seed = *seed;
  IVCurve measured = parse_iv_csv(read_file(data_path));
  if (measured.meta.source.empty()) measured.meta.source = "measured";

  const FitResult r = fit(measured, fc, cfg.params);
  ctx.emit("fit.json", fit_result_to_json(r).dump(2) + "\n");
  ctx.debug("rss " + std::to_string(r.rss) + " after " + std::to_string(r.n_evals) +
            " evaluations, best restart " + std::to_string(r.best_restart));

  // Model current in data units at the measured voltages.
  IVCurve model;
  model.meta.source = "model";
  const std::vector<double> im = branch_currents(measured, r.params, r.scales.s_v);
  for (std::size_t k = 0; k < measured.size(); ++k)
    model.points.push_back({measured.points[k].v, im[k] / r.scales.s_i});
  PlotOptions po;
  po.log_y = all_positive(measured) && all_positive(model);
  po.labels = {"measured", "model"};
  ctx.emit("fit.svg", render_svg_plot({measured, model}, po));
  if (!r.converged) ctx.info("warning: fit stopped at max_evals before converging");
}

void cmd_export(const Context& ctx, const RunConfig& cfg, std::optional<bool> delay) {
  NetlistOptions opts = cfg.netlist;
  if (delay) opts.include_delay_circuit = *delay;
  ctx.emit(opts.subckt_name + ".cir", export_subckt(cfg.params, opts));
}

void cmd_plot(const Context& ctx, const std::vector<std::string>& files, bool linear,
              const std::string& title) {
  std::vector<IVCurve> curves;
  PlotOptions po;
  for (const std::string& f : files) {
    IVCurve c = parse_iv_csv(read_file(f));
    po.labels.push_back(c.meta.source.empty() ? fs::path(f).filename().string()
                                              : c.meta.source);
    curves.push_back(std::move(c));
  }
  po.log_y = !linear;
  po.title = title;
  ctx.emit("plot.svg", render_svg_plot(curves, po));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compact delay model of Ovonic Threshold Switch devices", "ots"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool plot = false;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--override", overrides, "Config override key=value (repeatable)")
        ->allow_extra_args(false);
  };

  std::string config_path, data_path;
  auto* sweep = app.add_subcommand("sweep", "Generate a quasi-static i-v curve");
  sweep->add_option("config", config_path, "Run file")->required();
  sweep->add_flag("--plot", plot, "Also write curve.svg");
  add_common(sweep);

  auto* transient = app.add_subcommand("transient", "Integrate the state under a waveform");
  transient->add_option("config", config_path, "Run file")->required();
  transient->add_flag("--plot", plot, "Also write transient.svg");
  add_common(transient);

  auto* fitc = app.add_subcommand("fit", "Fit model parameters to a measured curve");
  fitc->add_option("data", data_path, "Measured *.iv.csv")->required();
  fitc->add_option("config", config_path, "Run file with a fit block")->required();
  fitc->add_option("--seed", seed, "Override fit.seed");
  fitc->add_flag("--plot", plot, "Accepted for symmetry; fit always writes fit.svg");
  add_common(fitc);

  std::optional<bool> delay;
  auto* exportc = app.add_subcommand("export-netlist", "Write the SPICE subcircuit");
  exportc->add_option("config", config_path, "Run file")->required();
  exportc->add_option("--delay", delay, "Include the delay branch (true/false)");
  add_common(exportc);

  std::vector<std::string> plot_files;
  bool linear = false;
  std::string title;
  auto* plotc = app.add_subcommand("plot", "Overlay *.iv.csv curves into plot.svg");
  plotc->add_option("curves", plot_files, "Curve files")->required();
  plotc->add_flag("--linear", linear, "Linear current axis");
  plotc->add_option("--title", title, "Plot title");
  plotc->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  const Context ctx{out, err, log_level(), fs::path(out_dir)};
  try {
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + out_dir + "': " + ec.message());

    if (*plotc) {
      cmd_plot(ctx, plot_files, linear, title);
      return kOk;
    }
    const RunConfig cfg = load_run(config_path, overrides);
    if (*sweep) cmd_sweep(ctx, cfg, plot);
    if (*transient) cmd_transient(ctx, cfg, plot);
    if (*fitc) cmd_fit(ctx, data_path, cfg, seed);
    if (*exportc) cmd_export(ctx, cfg, delay);
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "[config] error: " << e.what() << "\n\n" << kSchemaHelp;
    return kUsageError;
  } catch (const Error& e) {
    err << "[" << e.module() << "] error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace ots::cli
