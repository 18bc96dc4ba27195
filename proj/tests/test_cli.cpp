#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fedpne/config.hpp"
#include "fedpne/csvio.hpp"
#include "fedpne/harness.hpp"
#include "fedpne/svgplot.hpp"

using namespace fedpne;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "fedpne_unit_scratch";
  fs::create_directories(dir);
  return dir;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("an empty config file means all defaults") {
  for (const char* text : {"", "   \n\t\n", "{}"}) {
    ExperimentConfig cfg = parse_config_text(text, "test");
    CHECK(cfg.algorithm == Algorithm::fedpne);
    CHECK(cfg.objective.name == "garland");
    CHECK(cfg.objective.normalize);
    CHECK(cfg.server.M == 10);
    CHECK(cfg.server.T == 2000);
    CHECK(cfg.server.k == 2);
    CHECK(cfg.server.nu1 == 1.0);
    CHECK(cfg.server.rho == 0.5);
    CHECK(cfg.server.c == 0.1);
    CHECK(cfg.server.c1 == 1.0);
    CHECK(cfg.server.delta == 0.1);
    CHECK(cfg.noise.kind == NoiseKind::bounded_uniform);
    CHECK(cfg.noise.scale == 0.1);
    CHECK(cfg.perturb_scale == 1.0);
    CHECK(!cfg.dp.enabled);
    REQUIRE(cfg.seeds.size() == 10);
    for (uint64_t s = 0; s < 10; ++s) CHECK(cfg.seeds[s] == s);
  }
}

TEST_CASE("presets pick the confidence constants") {
  ExperimentConfig th = parse_config_text(R"({"preset": "theory"})", "test");
  CHECK(th.server.c == 2.0);
  CHECK(th.server.c1 == doctest::Approx(1.4542154334489537).epsilon(1e-12));  // 20^(1/8)

  ExperimentConfig th50 = parse_config_text(R"({"preset": "theory", "M": 50})", "test");
  CHECK(th50.server.c1 == doctest::Approx(std::pow(100.0, 0.125)).epsilon(1e-12));
  CHECK(th50.server.delta == doctest::Approx(0.02).epsilon(1e-15));  // 1/M default

  // explicit constants beat the preset
  ExperimentConfig mixed =
      parse_config_text(R"({"preset": "theory", "c": 0.5, "delta": 0.3})", "test");
  CHECK(mixed.server.c == 0.5);
  CHECK(mixed.server.c1 == doctest::Approx(1.4542154334489537).epsilon(1e-12));
  CHECK(mixed.server.delta == 0.3);

  CHECK(contains(message_of([] { parse_config_text(R"({"preset": "fancy"})", "t"); }),
                 "preset"));
}

TEST_CASE("invalid parameters are rejected with their constraint") {
  std::string msg = message_of([] { parse_config_text(R"({"rho": 1.5})", "t"); });
  CHECK(contains(msg, "config validation error"));
  CHECK(contains(msg, "rho must lie in (0,1)"));

  CHECK(contains(message_of([] { parse_config_text(R"({"M": 0})", "t"); }), "M"));
  CHECK(contains(message_of([] { parse_config_text(R"({"T": "soon"})", "t"); }), "integer"));
  CHECK(contains(message_of([] { parse_config_text(R"({"noise": {"scale": -1}})", "t"); }),
                 "noise.scale"));
}

TEST_CASE("unknown keys are rejected, not ignored") {
  CHECK(contains(message_of([] { parse_config_text(R"({"budget": 5})", "t"); }),
                 "unknown key 'budget'"));
  CHECK(contains(
      message_of([] { parse_config_text(R"({"noise": {"kind": "none", "level": 2}})", "t"); }),
      "unknown key 'level' in section 'noise'"));
  CHECK(contains(message_of([] { parse_config_text(R"({"objective": {"shape": 1}})", "t"); }),
                 "'shape'"));
  CHECK(contains(message_of([] { parse_config_text(R"({"dp": {"eps": 1}})", "t"); }),
                 "'eps'"));
}

TEST_CASE("privacy runs derive their constants from the mechanism") {
  ExperimentConfig dp = parse_config_text(
      R"({"algorithm": "dp-fedpne", "dp": {"epsilon": 1.0, "delta_dp": 0.05}})", "test");
  CHECK(dp.dp.enabled);
  CHECK(dp.dp_sigma2 == doctest::Approx(6.437751649736401).epsilon(1e-12));
  CHECK(dp.server.c == doctest::Approx(10.344275054143834).epsilon(1e-12));
  CHECK(dp.server.c1 == doctest::Approx(1.4542154334489537).epsilon(1e-12));

  // default dp parameters apply when the section is absent
  ExperimentConfig bare = parse_config_text(R"({"algorithm": "dp-fedpne"})", "test");
  CHECK(bare.dp.enabled);
  CHECK(bare.dp_sigma2 == doctest::Approx(6.437751649736401).epsilon(1e-12));

  CHECK(contains(
      message_of([] { parse_config_text(R"({"algorithm": "dp-fedpne", "c": 0.1})", "t"); }),
      "derived"));
  CHECK(contains(
      message_of([] { parse_config_text(R"({"dp": {"enabled": true}})", "t"); }),
      "dp-fedpne"));
  CHECK(contains(
      message_of([] {
        parse_config_text(R"({"algorithm": "dp-fedpne", "dp": {"epsilon": -1}})", "t");
      }),
      "epsilon"));
}

TEST_CASE("seed lists must be clean") {
  ExperimentConfig cfg = parse_config_text(R"({"seeds": [3, 1, 2]})", "test");
  CHECK(cfg.seeds == std::vector<uint64_t>{3, 1, 2});
  CHECK(contains(message_of([] { parse_config_text(R"({"seeds": []})", "t"); }),
                 "non-empty"));
  CHECK(contains(message_of([] { parse_config_text(R"({"seeds": [1, 1]})", "t"); }),
                 "distinct"));
  CHECK(contains(message_of([] { parse_config_text(R"({"seeds": [-4]})", "t"); }),
                 "non-negative"));
}

TEST_CASE("the optimum reference is a value or a scan, never both") {
  ExperimentConfig v = parse_config_text(R"({"fstar": {"value": 0.75}})", "test");
  CHECK(v.fstar.has_value);
  CHECK(v.fstar.value == 0.75);
  ExperimentConfig r = parse_config_text(R"({"fstar": {"resolution": 5001}})", "test");
  CHECK(r.fstar_resolution() == 5001);
  CHECK(contains(message_of([] {
                   parse_config_text(R"({"fstar": {"value": 1.0, "resolution": 100}})", "t");
                 }),
                 "not both"));
  CHECK(contains(message_of([] { parse_config_text(R"({"fstar": {"resolution": 2}})", "t"); }),
                 "resolution"));
}

TEST_CASE("per-objective default scan resolutions") {
  CHECK(parse_config_text("{}", "t").fstar_resolution() == 1000000);
  CHECK(parse_config_text(R"({"objective": {"name": "covid"}})", "t").fstar_resolution() ==
        4001);
}

TEST_CASE("objective section round-trips its parameters") {
  ExperimentConfig cfg = parse_config_text(
      R"({"objective": {"name": "covid", "metric": "final_infectious",
           "seir": {"beta": 0.4, "E0": 50}}})",
      "test");
  CHECK(cfg.objective.name == "covid");
  CHECK(cfg.objective.metric == InfectionMetric::final_infectious);
  CHECK(cfg.objective.seir.beta == 0.4);
  CHECK(cfg.objective.seir.E0 == 50);
  CHECK(cfg.objective.seir.gamma == doctest::Approx(1.0 / 6.0));  // untouched default

  CHECK(contains(
      message_of([] { parse_config_text(R"({"objective": {"name": "rosenbrock"}})", "t"); }),
      "objective.name"));
}

TEST_CASE("grid baseline settings parse and validate") {
  ExperimentConfig cfg =
      parse_config_text(R"({"algorithm": "grid", "grid": {"K": 3, "c": 0.5}})", "test");
  CHECK(cfg.algorithm == Algorithm::grid);
  CHECK(cfg.grid.K == 3);
  CHECK(cfg.grid.c == 0.5);
  ExperimentConfig dflt = parse_config_text(R"({"algorithm": "grid-baseline"})", "test");
  CHECK(dflt.algorithm == Algorithm::grid);
  CHECK(dflt.grid.K == 100);
  CHECK(dflt.grid.c == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(contains(message_of([] { parse_config_text(R"({"grid": {"K": 0}})", "t"); }),
                 "grid.K"));
}

TEST_CASE("parse errors carry the line number") {
  std::string msg =
      message_of([] { parse_config_text("{\n  \"M\": 5,\n  oops\n}", "cfg.json"); });
  CHECK(contains(msg, "cfg.json"));
  CHECK(contains(msg, "line 3"));
}

TEST_CASE("command-line overrides rewrite the file values") {
  ConfigOverrides ov;
  ov.algorithm = "grid";
  ov.preset = "theory";
  ov.has_seed = true;
  ov.seed = 42;
  ExperimentConfig cfg =
      parse_config_text(R"({"algorithm": "fedpne", "seeds": [0, 1, 2]})", "test", ov);
  CHECK(cfg.algorithm == Algorithm::grid);
  CHECK(cfg.server.c == 2.0);
  CHECK(cfg.seeds == std::vector<uint64_t>{42});
}

TEST_CASE("the resolved echo reloads to the same experiment") {
  ExperimentConfig cfg = parse_config_text(
      R"({"T": 750, "noise": {"kind": "truncated_gaussian", "scale": 0.2},
          "seeds": [5, 6], "objective": {"name": "doublesine", "rho1": 0.4}})",
      "test");
  std::string echo = config_to_json(cfg);
  ExperimentConfig back = parse_config_text(echo, "echo");
  CHECK(back.algorithm == cfg.algorithm);
  CHECK(back.server.T == 750);
  CHECK(back.server.c == cfg.server.c);
  CHECK(back.noise.kind == NoiseKind::truncated_gaussian);
  CHECK(back.noise.scale == 0.2);
  CHECK(back.seeds == cfg.seeds);
  CHECK(back.objective.name == "doublesine");
  CHECK(back.objective.rho1 == 0.4);
}

TEST_CASE("load_config reports unreadable paths") {
  CHECK(contains(message_of([] { load_config("/nonexistent/nowhere.json"); }),
                 "cannot open"));
}

TEST_CASE("objective construction honors the optimum settings") {
  ExperimentConfig cfg = parse_config_text(R"({"fstar": {"resolution": 20001}})", "test");
  BuiltObjective built = build_objective(cfg);
  CHECK(built.fstar == 1.0);  // normalized: grid max maps to 1
  REQUIRE(built.argmax.size() == 1);
  CHECK(built.objective(built.argmax) == 1.0);

  ExperimentConfig raw = parse_config_text(
      R"({"objective": {"name": "garland", "normalize": false},
          "fstar": {"resolution": 20001}})",
      "test");
  BuiltObjective rb = build_objective(raw);
  // a 20001-point grid undershoots the narrow cusp peak a little
  CHECK(rb.fstar == scan_grid(make_garland(), 20001).max_value);
  CHECK(rb.fstar == doctest::Approx(0.9968).epsilon(5e-3));

  ExperimentConfig pinned = parse_config_text(
      R"({"objective": {"normalize": false}, "fstar": {"value": 1.0}})", "test");
  BuiltObjective pb = build_objective(pinned);
  CHECK(pb.fstar == 1.0);
  CHECK(!pb.scanned);
}

TEST_CASE("17 significant digits round-trip doubles exactly") {
  for (double v : {1.0 / 3.0, 0.1, -0.0, 1.2345678901234567e+300, 5e-324, -271.25}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("trace files round-trip bit for bit") {
  ServerConfig cfg{3, 60, 2, 1.0, 0.5, 0.1, 1.0, 1.0 / 3};
  RunSetup setup;
  setup.server = cfg;
  setup.ensemble = make_ensemble(normalize_objective(make_garland(), 10001), 3, 1.0,
                                 NoiseModel{NoiseKind::bounded_uniform, 0.1}, 5);
  setup.fstar = 1.0;
  RunTrace t = run_experiment(setup, 5);

  fs::path p = scratch() / "trace_roundtrip.csv";
  emit_trace(t, p.string());
  auto pulls = parse_trace(p.string());
  REQUIRE(pulls.size() == t.pulls.size());
  for (size_t i = 0; i < pulls.size(); ++i) {
    CHECK(pulls[i].client == t.pulls[i].client);
    CHECK(pulls[i].round == t.pulls[i].round);
    CHECK(pulls[i].phase == t.pulls[i].phase);
    CHECK(pulls[i].depth == t.pulls[i].depth);
    CHECK(pulls[i].node_index == t.pulls[i].node_index);
    CHECK(pulls[i].x == t.pulls[i].x);
    CHECK(pulls[i].reward == t.pulls[i].reward);
    CHECK(pulls[i].regret_inc == t.pulls[i].regret_inc);
  }
}

TEST_CASE("an empty trace writes just the header") {
  fs::path p = scratch() / "trace_empty.csv";
  emit_trace(RunTrace{}, p.string());
  CHECK(slurp(p) == "client,round,phase,depth,node_index,x0,reward,regret_increment\n");
  CHECK(parse_trace(p.string()).empty());
}

TEST_CASE("multi-axis points get one column per axis") {
  RunTrace t;
  t.pulls.push_back({0, 1, 1, 2, 3, {0.125, 2.0 / 3.0}, 0.5, 0.25});
  t.pulls.push_back({1, 1, 1, 2, 4, {0.625, 1.0 / 7.0}, 0.75, 0.0});
  fs::path p = scratch() / "trace_2d.csv";
  emit_trace(t, p.string());
  std::string body = slurp(p);
  CHECK(contains(body, "node_index,x0,x1,reward"));
  auto pulls = parse_trace(p.string());
  REQUIRE(pulls.size() == 2);
  CHECK(pulls[0].x == t.pulls[0].x);
  CHECK(pulls[1].x == t.pulls[1].x);
}

TEST_CASE("malformed trace files name the offending line") {
  fs::path p = scratch() / "trace_bad.csv";
  {
    std::ofstream out(p);
    out << "client,round,phase,depth,node_index,x0,reward,regret_increment\n";
    out << "0,1,1,2,3,0.5,0.5,0.1\n";
    out << "0,2,1,2,3,0.5\n";  // too few fields
  }
  std::string msg = message_of([&] { parse_trace(p.string()); });
  CHECK(contains(msg, "line 3"));
  CHECK(contains(msg, "fields"));

  {
    std::ofstream out(p);
    out << "client,round,phase,depth,node_index,x0,reward,regret_increment\n";
    out << "0,1,1,2,3,0.5,abc,0.1\n";
  }
  CHECK(contains(message_of([&] { parse_trace(p.string()); }), "bad numeric"));
  CHECK(contains(message_of([] { parse_trace("/nonexistent/trace.csv"); }), "cannot open"));
}

TEST_CASE("summary files round-trip and keep one row per round") {
  AggregatedRegret agg;
  agg.n_seeds = 10;
  for (int t = 0; t < 25; ++t) {
    agg.mean.push_back(0.37 * (t + 1));
    agg.stddev.push_back(0.01 * t);
  }
  fs::path p = scratch() / "summary_roundtrip.csv";
  emit_summary(agg, p.string());

  std::string body = slurp(p);
  CHECK(std::count(body.begin(), body.end(), '\n') == 26);  // header + 25 rounds

  AggregatedRegret back = parse_summary(p.string());
  CHECK(back.n_seeds == 10);
  CHECK(back.mean == agg.mean);
  CHECK(back.stddev == agg.stddev);
}

TEST_CASE("communication files report per-phase elimination counts") {
  ServerConfig cfg{4, 300, 2, 1.0, 0.5, 0.1, 1.0, 0.25};
  RunSetup setup;
  setup.server = cfg;
  setup.ensemble = make_ensemble(normalize_objective(make_garland(), 10001), 4, 0.0,
                                 NoiseModel{NoiseKind::none, 0}, 2);
  setup.fstar = 1.0;
  RunTrace t = run_experiment(setup, 2);
  fs::path p = scratch() / "comm.csv";
  emit_communication(t, p.string());

  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "phase,depth,active_nodes,eliminated,events");
  size_t i = 0;
  while (std::getline(in, line)) {
    REQUIRE(i < t.phases.size());
    const PhaseRecord& ph = t.phases[i];
    long long elim = 0;
    for (char e : ph.eliminated) elim += e ? 1 : 0;
    std::ostringstream expect;
    expect << ph.phase << ',' << ph.depth << ',' << ph.active.size() << ',' << elim << ','
           << ph.events;
    CHECK(line == expect.str());
    if (ph.truncated) CHECK(contains(line, ",0," + std::to_string(ph.events)));
    ++i;
  }
  CHECK(i == t.phases.size());
}

TEST_CASE("plots are byte-identical across renders") {
  std::vector<PlotSeries> series;
  PlotSeries a{"M=5", {}, {}};
  PlotSeries b{"M=50", {}, {}};
  for (int t = 0; t < 100; ++t) {
    a.mean.push_back(0.9 * (t + 1));
    a.stddev.push_back(0.05 * std::sqrt((double)t + 1));
    b.mean.push_back(0.6 * (t + 1));
    b.stddev.push_back(0.03 * std::sqrt((double)t + 1));
  }
  series = {a, b};
  std::string s1 = render_regret_svg(series);
  std::string s2 = render_regret_svg(series);
  CHECK(s1 == s2);

  fs::path p1 = scratch() / "plot1.svg", p2 = scratch() / "plot2.svg";
  render_regret_plot(series, p1.string());
  render_regret_plot(series, p2.string());
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1) == s1);
}

TEST_CASE("plots contain a line, a band, and a legend entry per series") {
  std::vector<PlotSeries> series{{"alpha", {1, 2, 3}, {0.1, 0.1, 0.1}},
                                 {"beta", {2, 3, 4}, {0.2, 0.2, 0.2}},
                                 {"gamma&co", {3, 4, 5}, {0.1, 0.2, 0.3}}};
  std::string svg = render_regret_svg(series);
  CHECK(contains(svg, "<svg"));
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  size_t polylines = 0, bands = 0;
  for (size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  for (size_t pos = 0; (pos = svg.find("fill-opacity=\"0.25\"", pos)) != std::string::npos;
       ++pos)
    ++bands;
  CHECK(polylines == 3);
  CHECK(bands == 3);
  CHECK(contains(svg, ">alpha</text>"));
  CHECK(contains(svg, ">beta</text>"));
  CHECK(contains(svg, ">gamma&amp;co</text>"));  // labels are escaped
  CHECK(contains(svg, "#1f77b4"));
  CHECK(contains(svg, "#d62728"));
  CHECK(contains(svg, "#2ca02c"));
}

TEST_CASE("degenerate plot inputs are rejected") {
  CHECK_THROWS_AS(render_regret_svg({}), std::runtime_error);
  CHECK_THROWS_AS(render_regret_svg({{"empty", {}, {}}}), std::runtime_error);
  CHECK_THROWS_AS(render_regret_svg({{"bad", {1, 2}, {0.1}}}), std::runtime_error);
  // a single-point series still renders
  std::string svg = render_regret_svg({{"dot", {5.0}, {1.0}}});
  CHECK(contains(svg, "polyline"));
}
