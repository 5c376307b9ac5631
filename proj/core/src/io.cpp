#include "ots/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ots/error.hpp"

namespace ots {

using nlohmann::json;
using nlohmann::ordered_json;

// ---- CSV -----------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line) {
  double x = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(x))
    throw ParseError("line " + std::to_string(line) + ": malformed number '" +
                         std::string(field) + "'",
                     line);
  return x;
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void validate(const IVCurve& c) {
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!std::isfinite(c.points[k].v) || !std::isfinite(c.points[k].i))
      throw ParseError("curve point " + std::to_string(k) + " is not finite", 0);
}

IVCurve parse_iv_csv(std::string_view text) {
  IVCurve curve;
  std::optional<std::size_t> col_v, col_i;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (col_v) continue;
      std::string_view body = trim(line.substr(1));
      const std::size_t colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(body.substr(0, colon));
      const std::string value(trim(body.substr(colon + 1)));
      if (key == "source")
        curve.meta.source = value;
      else if (key == "normalized")
        curve.meta.normalized = value == "true";
      else if (key == "sweep_direction")
        curve.meta.sweep_direction = value;
      continue;
    }
    const auto fields = split(line, ',');
    if (!col_v) {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        if (fields[k] == "v" && !col_v) col_v = k;
        if (fields[k] == "i" && !col_i) col_i = k;
      }
      if (!col_v || !col_i)
        throw ParseError("line " + std::to_string(line_no) +
                             ": header must contain 'v' and 'i' columns",
                         line_no);
      width = std::max(*col_v, *col_i) + 1;
      continue;
    }
    if (fields.size() < width)
      throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                           std::to_string(width) + " columns",
                       line_no);
    curve.points.push_back(
        {parse_number(fields[*col_v], line_no), parse_number(fields[*col_i], line_no)});
  }
  if (!col_v) throw ParseError("missing header row with 'v' and 'i' columns", 0);
  if (curve.empty()) throw ParseError("no data rows", 0);
  return curve;
}

std::string write_curve_csv(const IVCurve& curve) {
  std::string out;
  if (!curve.meta.source.empty()) out += "# source: " + curve.meta.source + "\n";
  if (curve.meta.normalized) out += "# normalized: true\n";
  if (curve.meta.sweep_direction)
    out += "# sweep_direction: " + *curve.meta.sweep_direction + "\n";
  out += "v,i\n";
  for (const IVPoint& p : curve.points) {
    out += format17(p.v);
    out += ',';
    out += format17(p.i);
    out += '\n';
  }
  return out;
}

std::string write_transient_csv(const TransientResult& result) {
  std::string out = "t,v,i,zeta,triggered\n";
  for (const TransientSample& s : result.samples) {
    out += format17(s.t) + ',' + format17(s.v_device) + ',' + format17(s.i_device) +
           ',' + format17(s.zeta) + ',' + (s.triggered ? "1" : "0") + '\n';
  }
  return out;
}

// ---- configuration -------------------------------------------------------

namespace {

// Walks one JSON object, tracking its pointer path and the keys consumed.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key)) throw ConfigError(child(key), "required key is missing");
    return obj_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(child(key), "expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }

  std::int64_t integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    return has(key) ? integer(key) : (seen_.insert(key), fallback);
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  template <typename E>
  E choice(const std::string& key, std::initializer_list<std::pair<const char*, E>> options,
           std::optional<E> fallback = std::nullopt) {
    if (!has(key) && fallback) return *fallback;
    const std::string s = string(key);
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(child(key), "unknown value '" + s + "' (expected one of " + allowed + ")");
  }

  // Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) throw ConfigError(child(key), "unknown key");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

ModelParams read_params(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  ModelParams p;
  p.Is = r.number("Is");
  p.beta_F = r.number("beta_F");
  p.alpha_R = r.number("alpha_R");
  p.V_T = r.number("V_T");
  p.K = r.number("K");
  p.I_state = r.number("I_state");
  p.R2 = r.number("R2");
  p.C2 = r.number("C2");
  p.C = r.number("C");
  p.v_th = r.number("v_th");
  p.i_th = r.number("i_th");
  p.Rb = r.number("Rb");
  if (r.has("cap_junction")) {
    ObjectReader cj(r.at("cap_junction"), r.child("cap_junction"));
    p.cap_junction = JunctionCapacitanceParams{cj.number("Cj0"), cj.number("vj"), cj.number("M")};
    cj.finish();
  }
  if (r.has("cap_diffusion")) {
    ObjectReader cd(r.at("cap_diffusion"), r.child("cap_diffusion"));
    const json& taus = cd.at("tau_j");
    if (!taus.is_array()) throw ConfigError(cd.child("tau_j"), "expected an array");
    DiffusionCapacitanceParams d;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      if (!taus[k].is_number())
        throw ConfigError(cd.child("tau_j") + "/" + std::to_string(k), "expected a number");
      d.tau_j.push_back(taus[k].get<double>());
    }
    cd.finish();
    p.cap_diffusion = std::move(d);
  }
  p.nonlinear_cap = r.boolean_or("nonlinear_cap", false);
  r.finish();

  try {
    validate(p);
  } catch (const DomainError& e) {
    // Messages lead with the offending field name, e.g. "C2 must be > 0".
    std::string msg = e.what();
    std::string field = msg.substr(0, msg.find(' '));
    std::replace(field.begin(), field.end(), '.', '/');
    throw ConfigError(path + "/" + field, msg);
  }
  return p;
}

SolverOptions read_solver(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  SolverOptions s;
  s.v_lo = r.number_or("v_lo", s.v_lo);
  s.v_hi = r.number_or("v_hi", s.v_hi);
  s.tol = r.number_or("tol", s.tol);
  s.max_iter = static_cast<int>(r.integer_or("max_iter", s.max_iter));
  r.finish();
  if (!(s.v_lo < s.v_hi)) throw ConfigError(path + "/v_lo", "v_lo must be < v_hi");
  if (!(s.tol > 0)) throw ConfigError(path + "/tol", "tol must be > 0");
  if (s.max_iter < 1) throw ConfigError(path + "/max_iter", "max_iter must be >= 1");
  return s;
}

NetlistOptions read_netlist(const json& doc, const std::string& path) {
  ObjectReader r(doc, path);
  NetlistOptions n;
  n.subckt_name = r.string_or("subckt_name", n.subckt_name);
  n.include_delay_circuit = r.boolean_or("include_delay_circuit", n.include_delay_circuit);
  n.anode = r.string_or("anode", n.anode);
  n.cathode = r.string_or("cathode", n.cathode);
  r.finish();
  for (const auto& [key, value] : {std::pair{"subckt_name", &n.subckt_name},
                                   std::pair{"anode", &n.anode},
                                   std::pair{"cathode", &n.cathode}})
    if (!is_valid_identifier(*value))
      throw ConfigError(path + "/" + key, "identifier must be [A-Za-z0-9_]+");
  return n;
}

SweepRun read_sweep(const json& doc, const std::string& path, const ModelParams& p) {
  ObjectReader r(doc, path);
  SweepRun run;
  SweepSpec& s = run.spec;
  s.mode = r.choice<SweepMode>("mode", {{"current_sweep", SweepMode::CurrentSweep},
                                        {"voltage_sweep_with_Rb", SweepMode::VoltageSweepWithRb}});
  s.start = r.number("start");
  s.stop = r.number("stop");
  const std::int64_t points = r.integer("points");
  if (points < 2) throw ConfigError(path + "/points", "points must be >= 2");
  s.points = static_cast<std::size_t>(points);
  s.dwell = r.number_or("dwell", 10.0 * tau(p));
  s.direction = r.choice<SweepDirection>("direction",
                                         {{"up", SweepDirection::Up},
                                          {"down", SweepDirection::Down},
                                          {"up_down", SweepDirection::UpDown}},
                                         SweepDirection::Up);
  s.spacing = r.choice<SweepSpacing>(
      "spacing", {{"linear", SweepSpacing::Linear}, {"log", SweepSpacing::Log}},
      SweepSpacing::Linear);
  run.zeta0 = r.number_or("zeta0", 0.0);
  r.finish();
  try {
    validate(s);
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  if (!(run.zeta0 >= 0 && run.zeta0 <= zeta_on(p)))
    throw ConfigError(path + "/zeta0", "zeta0 must lie in [0, I_state*R2]");
  return run;
}

TransientSpec read_transient(const json& doc, const std::string& path, const ModelParams& p) {
  ObjectReader r(doc, path);
  const std::string wpath = r.child("waveform");
  ObjectReader w(r.at("waveform"), wpath);
  const SourceKind kind = w.choice<SourceKind>(
      "kind", {{"voltage_source", SourceKind::Voltage}, {"current_source", SourceKind::Current}});
  const json& segs = w.at("segments");
  if (!segs.is_array() || segs.empty())
    throw ConfigError(wpath + "/segments", "expected a non-empty array");
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    ObjectReader s(segs[k], wpath + "/segments/" + std::to_string(k));
    Segment seg;
    seg.t_start = s.number("t_start");
    seg.t_end = s.number("t_end");
    seg.shape = s.choice<SegmentShape>("shape",
                                       {{"constant", SegmentShape::Constant},
                                        {"ramp", SegmentShape::Ramp},
                                        {"pulse", SegmentShape::Pulse}},
                                       SegmentShape::Constant);
    seg.level_start = s.number("level_start");
    seg.level_end = s.number_or("level_end", seg.level_start);
    s.finish();
    segments.push_back(seg);
  }
  w.finish();
  TransientSpec t;
  try {
    t.drive = Waveform(kind, std::move(segments));
  } catch (const DomainError& e) {
    throw ConfigError(wpath + "/segments", e.what());
  }
  t.dt = r.number("dt");
  if (!(t.dt > 0)) throw ConfigError(path + "/dt", "dt must be > 0");
  t.zeta0 = r.number_or("zeta0", 0.0);
  if (!(t.zeta0 >= 0 && t.zeta0 <= zeta_on(p)))
    throw ConfigError(path + "/zeta0", "zeta0 must lie in [0, I_state*R2]");
  r.finish();
  return t;
}

FitConfig read_fit(const json& doc, const std::string& path, const ModelParams& p) {
  ObjectReader r(doc, path);
  FitConfig f;
  const json& free = r.at("free");
  if (!free.is_array()) throw ConfigError(path + "/free", "expected an array of names");
  for (std::size_t k = 0; k < free.size(); ++k) {
    if (!free[k].is_string())
      throw ConfigError(path + "/free/" + std::to_string(k), "expected a string");
    f.free_params.push_back(free[k].get<std::string>());
  }
  if (r.has("bounds")) {
    const std::string bpath = r.child("bounds");
    const json& b = r.at("bounds");
    if (!b.is_object()) throw ConfigError(bpath, "expected an object");
    for (const auto& [name, range] : b.items()) {
      if (!range.is_array() || range.size() != 2 || !range[0].is_number() ||
          !range[1].is_number())
        throw ConfigError(bpath + "/" + name, "expected [lo, hi]");
      f.bounds[name] = Bounds{range[0].get<double>(), range[1].get<double>()};
    }
  }
  f.loss_space = r.choice<LossSpace>(
      "loss_space",
      {{"log_current", LossSpace::LogCurrent}, {"linear_current", LossSpace::LinearCurrent}},
      LossSpace::LogCurrent);
  f.max_evals = static_cast<int>(r.integer_or("max_evals", f.max_evals));
  const std::int64_t seed = r.integer_or("seed", 0);
  if (seed < 0) throw ConfigError(path + "/seed", "seed must be >= 0");
  f.seed = static_cast<std::uint64_t>(seed);
  f.restarts = static_cast<int>(r.integer_or("restarts", f.restarts));
  if (r.has("initial_scales")) {
    ObjectReader s(r.at("initial_scales"), r.child("initial_scales"));
    f.initial_scales.s_i = s.number_or("s_i", 1.0);
    f.initial_scales.s_v = s.number_or("s_v", 1.0);
    s.finish();
  }
  f.allow_degenerate_scales = r.boolean_or("allow_degenerate_scales", false);
  r.finish();
  try {
    f = resolve_config(f, p);
  } catch (const FitError& e) {
    throw ConfigError(path, e.what());
  }
  return f;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  ObjectReader top(doc, "");
  RunConfig cfg;
  cfg.params = read_params(top.at("params"), "/params");
  if (top.has("solver")) cfg.solver = read_solver(top.at("solver"), "/solver");
  if (top.has("netlist")) cfg.netlist = read_netlist(top.at("netlist"), "/netlist");
  int runs = 0;
  if (top.has("sweep")) {
    cfg.sweep = read_sweep(top.at("sweep"), "/sweep", cfg.params);
    ++runs;
  }
  if (top.has("transient")) {
    cfg.transient = read_transient(top.at("transient"), "/transient", cfg.params);
    ++runs;
  }
  if (top.has("fit")) {
    cfg.fit = read_fit(top.at("fit"), "/fit", cfg.params);
    ++runs;
  }
  if (runs > 1) throw ConfigError("/", "at most one of sweep, transient, fit may be given");
  top.finish();
  return cfg;
}

RunConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

void apply_override(json& doc, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("/", "override must look like key=value: '" + std::string(assignment) + "'");
  std::string path(trim(assignment.substr(0, eq)));
  const std::string value(trim(assignment.substr(eq + 1)));
  if (path.find('.') == std::string::npos) path = "params." + path;

  json* node = &doc;
  std::string pointer;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    pointer += "/" + key;
    if (key.empty()) throw ConfigError(pointer, "empty override path segment");
    if (!node->is_object()) throw ConfigError(pointer, "override path crosses a non-object");
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    pos = dot + 1;
  }
}

ordered_json params_to_json(const ModelParams& p) {
  ordered_json j;
  j["Is"] = p.Is;
  j["beta_F"] = p.beta_F;
  j["alpha_R"] = p.alpha_R;
  j["V_T"] = p.V_T;
  j["K"] = p.K;
  j["I_state"] = p.I_state;
  j["R2"] = p.R2;
  j["C2"] = p.C2;
  j["C"] = p.C;
  j["v_th"] = p.v_th;
  j["i_th"] = p.i_th;
  j["Rb"] = p.Rb;
  if (p.cap_junction)
    j["cap_junction"] = {{"Cj0", p.cap_junction->Cj0},
                         {"vj", p.cap_junction->vj},
                         {"M", p.cap_junction->M}};
  if (p.cap_diffusion) j["cap_diffusion"] = {{"tau_j", p.cap_diffusion->tau_j}};
  if (p.nonlinear_cap) j["nonlinear_cap"] = true;
  return j;
}

ordered_json fit_result_to_json(const FitResult& r) {
  ordered_json j;
  j["params"] = params_to_json(r.params);
  j["scales"] = {{"s_i", r.scales.s_i}, {"s_v", r.scales.s_v}};
  j["rss"] = r.rss;
  j["initial_rss"] = r.initial_rss;
  j["n_evals"] = r.n_evals;
  j["converged"] = r.converged;
  j["best_restart"] = r.best_restart;
  j["per_point_residuals"] = r.per_point_residuals;
  return j;
}

// ---- plots ---------------------------------------------------------------

namespace {

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fixed2(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> ticks;
};

Axis linear_axis(double lo, double hi) {
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
  Axis a;
  const double k0 = std::floor(lo / step);
  const double k1 = std::ceil(hi / step);
  a.lo = k0 * step;
  a.hi = k1 * step;
  for (double k = k0; k <= k1; k += 1.0) a.ticks.push_back(k * step);
  return a;
}

// Axis in log10 units with decade ticks, thinned to at most ~10 labels.
Axis log_axis(double lo, double hi) {
  Axis a;
  a.lo = std::floor(lo);
  a.hi = std::ceil(hi);
  if (a.lo == a.hi) a.hi += 1.0;
  const double decades = a.hi - a.lo;
  const double every = std::max(1.0, std::ceil(decades / 10.0));
  for (double d = a.lo; d <= a.hi; d += every) a.ticks.push_back(d);
  return a;
}

}  // namespace

std::string render_svg_plot(const std::vector<IVCurve>& curves, const PlotOptions& options) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (std::size_t k = 0; k < curves[c].size(); ++k) {
      const IVPoint& p = curves[c].points[k];
      if (!std::isfinite(p.v) || !std::isfinite(p.i))
        throw Error("io", "plot: curve " + std::to_string(c) + " has non-finite values");
      if (options.log_y && !(p.i > 0))
        throw Error("io", "plot: non-positive current at curve " + std::to_string(c) +
                              ", point " + std::to_string(k) + " with log_y");
      const double y = options.log_y ? std::log10(p.i) : p.i;
      xmin = std::min(xmin, p.v);
      xmax = std::max(xmax, p.v);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) throw Error("io", "plot: no points to draw");
  if (options.width < 200 || options.height < 150)
    throw Error("io", "plot: canvas must be at least 200x150");

  const Axis ax = linear_axis(xmin, xmax);
  const Axis ay = options.log_y ? log_axis(ymin, ymax) : linear_axis(ymin, ymax);

  const double W = options.width, H = options.height;
  const double left = 80, right = 20, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto sy = [&](double y) { return top + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width
    << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
    << options.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
    << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    o << "<text x=\"" << fixed2(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(options.title) << "</text>\n";

  o << "<g stroke=\"black\" stroke-width=\"1\">\n";
  o << "<rect x=\"" << fixed2(left) << "\" y=\"" << fixed2(top) << "\" width=\"" << fixed2(pw)
    << "\" height=\"" << fixed2(ph) << "\" fill=\"none\"/>\n";
  for (double t : ax.ticks)
    o << "<line x1=\"" << fixed2(sx(t)) << "\" y1=\"" << fixed2(top + ph) << "\" x2=\""
      << fixed2(sx(t)) << "\" y2=\"" << fixed2(top + ph + 5) << "\"/>\n";
  for (double t : ay.ticks)
    o << "<line x1=\"" << fixed2(left - 5) << "\" y1=\"" << fixed2(sy(t)) << "\" x2=\""
      << fixed2(left) << "\" y2=\"" << fixed2(sy(t)) << "\"/>\n";
  o << "</g>\n";

  o << "<g fill=\"black\">\n";
  for (double t : ax.ticks)
    o << "<text x=\"" << fixed2(sx(t)) << "\" y=\"" << fixed2(top + ph + 18)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  for (double t : ay.ticks) {
    const std::string label = options.log_y ? "1e" + tick_label(t) : tick_label(t);
    o << "<text x=\"" << fixed2(left - 8) << "\" y=\"" << fixed2(sy(t) + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  o << "<text x=\"" << fixed2(left + pw / 2) << "\" y=\"" << fixed2(H - 10)
    << "\" text-anchor=\"middle\">" << xml_escape(options.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << fixed2(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fixed2(top + ph / 2) << ")\">" << xml_escape(options.y_label) << "</text>\n";
  o << "</g>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < curves[c].size(); ++k) {
      const IVPoint& p = curves[c].points[k];
      const double y = options.log_y ? std::log10(p.i) : p.i;
      o << (k ? " " : "") << fixed2(sx(p.v)) << ',' << fixed2(sy(y));
    }
    o << "\"/>\n";
  }

  o << "<g>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    const std::string label = c < options.labels.size() ? options.labels[c] : curves[c].meta.source;
    const double y = top + 14 + 16 * static_cast<double>(c);
    o << "<line x1=\"" << fixed2(left + 10) << "\" y1=\"" << fixed2(y - 4) << "\" x2=\""
      << fixed2(left + 30) << "\" y2=\"" << fixed2(y - 4) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << fixed2(left + 36) << "\" y=\"" << fixed2(y) << "\">"
      << xml_escape(label) << "</text>\n";
  }
  o << "</g>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace ots
