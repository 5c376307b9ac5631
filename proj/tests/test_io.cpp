#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "golden.hpp"
#include "ots/error.hpp"
#include "ots/io.hpp"

using namespace ots;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json table1_doc() { return json::parse(slurp(OTS_DATA_DIR "/table1.json")); }

std::string config_error_path(const json& doc) {
  try {
    config_from_json(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Csv, ParsesSimpleFile) {
  const IVCurve c = parse_iv_csv("v,i\n0.1,1e-9\n0.2,2e-9\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.points[1], (IVPoint{0.2, 2e-9}));
  EXPECT_TRUE(c.meta.source.empty());
}

TEST(Csv, CommentsMetadataAndExtraColumns) {
  const IVCurve c = parse_iv_csv(
      "# source: probe station\n# normalized: true\n# sweep_direction: up_down\n"
      "t, i ,v\n# mid-file comment\n0, 1e-6, 0.5\r\n\n1, 2e-6, 0.6\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.points[0], (IVPoint{0.5, 1e-6}));
  EXPECT_EQ(c.meta.source, "probe station");
  EXPECT_TRUE(c.meta.normalized);
  EXPECT_EQ(c.meta.sweep_direction, "up_down");
}

TEST(Csv, MalformedNumberReportsLine) {
  try {
    parse_iv_csv("v,i\n0.1,1e-9\n0.2,abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_iv_csv("v,i\n0.1,nan\n"), ParseError);
  EXPECT_THROW(parse_iv_csv("v,i\n0.1,1e-9x\n"), ParseError);
  EXPECT_THROW(parse_iv_csv("v,i\n0.1\n"), ParseError);
}

TEST(Csv, MissingHeaderOrRows) {
  EXPECT_THROW(parse_iv_csv("a,b\n1,2\n"), ParseError);
  EXPECT_THROW(parse_iv_csv("# only a comment\n"), ParseError);
  EXPECT_THROW(parse_iv_csv("v,i\n"), ParseError);
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  IVCurve c;
  c.meta = {"roundtrip", true, "down"};
  for (int k = 0; k < 100000; ++k) c.points.push_back({u(rng), std::pow(10.0, u(rng)) * (k % 2 ? -1 : 1)});
  const IVCurve back = parse_iv_csv(write_curve_csv(c));
  EXPECT_EQ(back.meta, c.meta);
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t k = 0; k < c.size(); ++k) ASSERT_EQ(back.points[k], c.points[k]) << k;
}

TEST(Csv, MetadataOmittedWhenUnset) {
  IVCurve c;
  c.points = {{0.0, 0.0}};
  EXPECT_EQ(write_curve_csv(c), "v,i\n0,0\n");
}

TEST(Csv, TransientHeader) {
  TransientResult r;
  r.samples.push_back({0.0, 1.0, 2e-9, 0.5, true});
  EXPECT_EQ(write_transient_csv(r), "t,v,i,zeta,triggered\n0,1,2.0000000000000001e-09,0.5,1\n");
}

TEST(Config, Table1FileMatchesDefaults) {
  const RunConfig cfg = load_config(slurp(OTS_DATA_DIR "/table1.json"));
  EXPECT_EQ(cfg.params, table1_params());
  ASSERT_TRUE(cfg.sweep);
  EXPECT_EQ(cfg.sweep->spec.points, 400u);
  EXPECT_EQ(cfg.sweep->spec.spacing, SweepSpacing::Log);
  EXPECT_FALSE(cfg.transient);
  EXPECT_FALSE(cfg.fit);
}

TEST(Config, ErrorsCarryJsonPointer) {
  json d = table1_doc();
  d["params"].erase("Is");
  EXPECT_EQ(config_error_path(d), "/params/Is");

  d = table1_doc();
  d["params"]["C2"] = -1e-8;
  EXPECT_EQ(config_error_path(d), "/params/C2");

  d = table1_doc();
  d["params"]["Kappa"] = 1;
  EXPECT_EQ(config_error_path(d), "/params/Kappa");

  d = table1_doc();
  d["sweep"]["points"] = 1;
  EXPECT_EQ(config_error_path(d), "/sweep/points");

  d = table1_doc();
  d["sweep"]["direction"] = "sideways";
  EXPECT_EQ(config_error_path(d), "/sweep/direction");

  d = table1_doc();
  d["params"]["K"] = "0.7";
  EXPECT_EQ(config_error_path(d), "/params/K");

  d = table1_doc();
  d["fit"] = {{"free", {"K"}}};
  EXPECT_EQ(config_error_path(d), "/");

  EXPECT_THROW(load_config(std::string_view("{not json")), ConfigError);
}

TEST(Config, MessageIncludesPath) {
  json d = table1_doc();
  d["params"]["C2"] = 0;
  try {
    config_from_json(d);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("/params/C2: ", 0), 0u) << e.what();
  }
}

TEST(Config, SweepDefaults) {
  json d = table1_doc();
  d["sweep"] = {{"mode", "voltage_sweep_with_Rb"}, {"start", 0}, {"stop", 3}, {"points", 31}};
  const RunConfig cfg = config_from_json(d);
  EXPECT_EQ(cfg.sweep->spec.mode, SweepMode::VoltageSweepWithRb);
  EXPECT_DOUBLE_EQ(cfg.sweep->spec.dwell, 10 * tau(cfg.params));
  EXPECT_EQ(cfg.sweep->spec.direction, SweepDirection::Up);
  EXPECT_EQ(cfg.sweep->spec.spacing, SweepSpacing::Linear);
  EXPECT_EQ(cfg.sweep->zeta0, 0.0);
}

TEST(Config, TransientAndFitBlocks) {
  json d = table1_doc();
  d.erase("sweep");
  d["transient"] = {
      {"waveform",
       {{"kind", "voltage_source"},
        {"segments",
         {{{"t_start", 0}, {"t_end", 0.01}, {"shape", "pulse"}, {"level_start", 0},
           {"level_end", 3}}}}}},
      {"dt", 1e-4}};
  RunConfig cfg = config_from_json(d);
  ASSERT_TRUE(cfg.transient);
  EXPECT_EQ(cfg.transient->drive.value(0.005), 3.0);

  d.erase("transient");
  d["fit"] = {{"free", {"Is", "K"}},
              {"bounds", {{"K", {0.5, 0.9}}}},
              {"loss_space", "log_current"},
              {"seed", 5},
              {"restarts", 2}};
  cfg = config_from_json(d);
  ASSERT_TRUE(cfg.fit);
  EXPECT_EQ(cfg.fit->free_params, (std::vector<std::string>{"Is", "K"}));
  EXPECT_EQ(cfg.fit->bounds.at("K"), (Bounds{0.5, 0.9}));
  EXPECT_EQ(cfg.fit->bounds.at("Is"), (Bounds{1e-16, 1e-12}));
  EXPECT_EQ(cfg.fit->seed, 5u);

  d["fit"]["free"] = {"Is", "s_i"};
  EXPECT_THROW(config_from_json(d), ConfigError);
}

TEST(Config, OverridesMatchEditedFile) {
  json a = table1_doc();
  apply_override(a, "K=0.5");
  apply_override(a, "sweep.points=12");
  apply_override(a, "sweep.direction=down");
  json b = table1_doc();
  b["params"]["K"] = 0.5;
  b["sweep"]["points"] = 12;
  b["sweep"]["direction"] = "down";
  EXPECT_EQ(a, b);
  EXPECT_THROW(apply_override(a, "novalue"), ConfigError);
  EXPECT_THROW(apply_override(a, "params.K.x=1"), ConfigError);
}

TEST(Json, ParamsRoundTrip) {
  ModelParams p = table1_params();
  p.cap_junction = JunctionCapacitanceParams{1e-12, 0.8, 0.5};
  p.nonlinear_cap = true;
  const json doc = {{"params", json::parse(params_to_json(p).dump())}};
  EXPECT_EQ(config_from_json(doc).params, p);
}

TEST(Svg, OnePolylinePerCurveAndDeterministic) {
  IVCurve a, b;
  for (int k = 1; k <= 20; ++k) {
    a.points.push_back({0.1 * k, 1e-12 * std::exp(k)});
    b.points.push_back({0.1 * k, 2e-12 * std::exp(k)});
  }
  PlotOptions o;
  o.labels = {"a", "b"};
  const std::string s1 = render_svg_plot({a, b}, o);
  EXPECT_EQ(s1, render_svg_plot({a, b}, o));
  std::size_t n = 0;
  for (std::size_t pos = 0; (pos = s1.find("<polyline", pos)) != std::string::npos; ++pos) ++n;
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(s1.rfind("<svg", 0) == 0 || s1.rfind("<?xml", 0) == 0, true);
}

TEST(Svg, OverlaySnapshot) {
  const IVCurve measured = parse_iv_csv(slurp(OTS_DATA_DIR "/sample.iv.csv"));
  IVCurve model = measured;
  model.meta.source = "model";
  for (auto& pt : model.points) pt.i *= 1.5;
  PlotOptions o;
  o.title = "overlay";
  golden::check("overlay.svg", render_svg_plot({measured, model}, o));
}

TEST(Svg, Errors) {
  IVCurve c;
  c.points = {{0.1, 1e-9}, {0.2, -1e-9}};
  EXPECT_THROW(render_svg_plot({c}), Error);
  PlotOptions lin;
  lin.log_y = false;
  EXPECT_NO_THROW(render_svg_plot({c}, lin));
  EXPECT_THROW(render_svg_plot({}), Error);
}
