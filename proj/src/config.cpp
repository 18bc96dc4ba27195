#include "fedpne/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fedpne {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("config validation error: " + msg);
}

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail("section '" + section + "' must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) { ok = true; break; }
    if (!ok) fail("unknown key '" + item.key() + "' in " + section);
  }
}

double get_num(const json& o, const char* key, double dflt) {
  if (!o.contains(key)) return dflt;
  const json& v = o.at(key);
  if (!v.is_number()) fail(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

long long get_int(const json& o, const char* key, long long dflt) {
  if (!o.contains(key)) return dflt;
  const json& v = o.at(key);
  if (!v.is_number_integer()) fail(std::string("key '") + key + "' must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& o, const char* key, bool dflt) {
  if (!o.contains(key)) return dflt;
  const json& v = o.at(key);
  if (!v.is_boolean()) fail(std::string("key '") + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_str(const json& o, const char* key, const std::string& dflt) {
  if (!o.contains(key)) return dflt;
  const json& v = o.at(key);
  if (!v.is_string()) fail(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

ExperimentConfig resolve(json j, const std::string& origin, const ConfigOverrides& ov) {
  if (!j.is_object()) fail("the top level of '" + origin + "' must be a JSON object");
  if (!ov.algorithm.empty()) j["algorithm"] = ov.algorithm;
  if (!ov.preset.empty()) j["preset"] = ov.preset;
  if (ov.has_seed) j["seeds"] = json::array({ov.seed});

  reject_unknown(j, "the top level",
                 {"algorithm", "preset", "objective", "M", "T", "k", "nu1", "rho", "c", "c1",
                  "delta", "noise", "perturb_scale", "dp", "seeds", "fstar", "grid"});

  ExperimentConfig cfg = default_config();

  std::string algo = get_str(j, "algorithm", "fedpne");
  if (algo == "fedpne") cfg.algorithm = Algorithm::fedpne;
  else if (algo == "dp-fedpne") cfg.algorithm = Algorithm::dp_fedpne;
  else if (algo == "grid" || algo == "grid-baseline") cfg.algorithm = Algorithm::grid;
  else fail("algorithm must be one of fedpne | dp-fedpne | grid");

  cfg.preset = get_str(j, "preset", "experimental");
  if (cfg.preset != "experimental" && cfg.preset != "theory")
    fail("preset must be 'experimental' or 'theory'");

  cfg.server.M = (int)get_int(j, "M", 10);
  cfg.server.T = get_int(j, "T", 2000);
  cfg.server.k = (int)get_int(j, "k", 2);
  cfg.server.nu1 = get_num(j, "nu1", 1.0);
  cfg.server.rho = get_num(j, "rho", 0.5);
  if (cfg.server.M < 1) fail("M must be >= 1");

  bool has_c = j.contains("c"), has_c1 = j.contains("c1");
  if (cfg.preset == "experimental") {
    cfg.server.c = 0.1;
    cfg.server.c1 = 1.0;
  } else {
    cfg.server.c = 2.0;
    cfg.server.c1 = std::pow(2.0 * cfg.server.M, 1.0 / 8.0);
  }
  if (has_c) cfg.server.c = get_num(j, "c", 0.0);
  if (has_c1) cfg.server.c1 = get_num(j, "c1", 0.0);
  cfg.server.delta = j.contains("delta") ? get_num(j, "delta", 0.0) : 1.0 / cfg.server.M;

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    reject_unknown(n, "section 'noise'", {"kind", "scale"});
    std::string kind = get_str(n, "kind", "bounded_uniform");
    if (kind == "none") cfg.noise.kind = NoiseKind::none;
    else if (kind == "bounded_uniform") cfg.noise.kind = NoiseKind::bounded_uniform;
    else if (kind == "truncated_gaussian") cfg.noise.kind = NoiseKind::truncated_gaussian;
    else fail("noise.kind must be one of none | bounded_uniform | truncated_gaussian");
    cfg.noise.scale = get_num(n, "scale", 0.1);
    if (cfg.noise.scale < 0.0) fail("noise.scale must be >= 0");
  }

  cfg.perturb_scale = get_num(j, "perturb_scale", 1.0);
  if (cfg.perturb_scale < 0.0) fail("perturb_scale must be >= 0");

  if (j.contains("dp")) {
    const json& d = j.at("dp");
    // "sigma2" appears in resolved echoes; it is derived, so reloading ignores it
    reject_unknown(d, "section 'dp'", {"enabled", "epsilon", "delta_dp", "sigma2"});
    cfg.dp.enabled = get_bool(d, "enabled", cfg.algorithm == Algorithm::dp_fedpne);
    cfg.dp.epsilon = get_num(d, "epsilon", 1.0);
    cfg.dp.delta_dp = get_num(d, "delta_dp", 0.05);
  }
  if (cfg.algorithm == Algorithm::dp_fedpne) cfg.dp.enabled = true;
  else if (cfg.dp.enabled) fail("dp.enabled requires algorithm 'dp-fedpne'");

  if (cfg.dp.enabled) {
    if (has_c || has_c1)
      fail("c and c1 are derived from the privacy parameters when dp is enabled");
    try {
      cfg.dp_sigma2 = dp_sigma(cfg.dp.epsilon, cfg.dp.delta_dp);
      auto [cc, cc1] = dp_constants(cfg.dp_sigma2, cfg.server.M);
      cfg.server.c = cc;
      cfg.server.c1 = cc1;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (!s.is_array() || s.empty()) fail("seeds must be a non-empty array of integers");
    cfg.seeds.clear();
    std::set<uint64_t> seen;
    for (const json& v : s) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        fail("seeds must be non-negative integers");
      uint64_t sv = v.get<uint64_t>();
      if (!seen.insert(sv).second) fail("seeds must be distinct");
      cfg.seeds.push_back(sv);
    }
  }

  if (j.contains("fstar")) {
    const json& f = j.at("fstar");
    reject_unknown(f, "section 'fstar'", {"value", "resolution"});
    if (f.contains("value") && f.contains("resolution"))
      fail("fstar: specify either 'value' or 'resolution', not both");
    if (f.contains("value")) {
      cfg.fstar.has_value = true;
      cfg.fstar.value = get_num(f, "value", 1.0);
    }
    if (f.contains("resolution")) {
      cfg.fstar.resolution = (long)get_int(f, "resolution", 0);
      if (cfg.fstar.resolution < 10) fail("fstar.resolution must be >= 10");
    }
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, "section 'grid'", {"K", "c"});
    cfg.grid.K = (int)get_int(g, "K", 100);
    cfg.grid.c = get_num(g, "c", cfg.grid.c);
    if (cfg.grid.K < 1) fail("grid.K must be >= 1");
    if (!(cfg.grid.c > 0.0)) fail("grid.c must be > 0");
  }

  if (j.contains("objective")) {
    const json& o = j.at("objective");
    reject_unknown(o, "section 'objective'",
                   {"name", "rho1", "rho2", "normalize", "seir", "metric"});
    cfg.objective.name = get_str(o, "name", "garland");
    if (cfg.objective.name != "garland" && cfg.objective.name != "doublesine" &&
        cfg.objective.name != "covid")
      fail("objective.name must be one of garland | doublesine | covid");
    cfg.objective.rho1 = get_num(o, "rho1", 0.3);
    cfg.objective.rho2 = get_num(o, "rho2", 0.8);
    cfg.objective.normalize = get_bool(o, "normalize", true);
    std::string metric = get_str(o, "metric", "cumulative_infected");
    if (metric == "cumulative_infected") cfg.objective.metric = InfectionMetric::cumulative_infected;
    else if (metric == "final_infectious") cfg.objective.metric = InfectionMetric::final_infectious;
    else fail("objective.metric must be 'cumulative_infected' or 'final_infectious'");
    if (o.contains("seir")) {
      const json& s = o.at("seir");
      reject_unknown(s, "section 'objective.seir'",
                     {"beta", "gamma", "sigma_e", "N", "E0", "I0", "R0", "V_full",
                      "alpha_full", "horizon_days", "dt"});
      SeirParams& p = cfg.objective.seir;
      p.beta = get_num(s, "beta", p.beta);
      p.gamma = get_num(s, "gamma", p.gamma);
      p.sigma_e = get_num(s, "sigma_e", p.sigma_e);
      p.N = get_num(s, "N", p.N);
      p.E0 = get_num(s, "E0", p.E0);
      p.I0 = get_num(s, "I0", p.I0);
      p.R0 = get_num(s, "R0", p.R0);
      p.V_full = get_num(s, "V_full", p.V_full);
      p.alpha_full = get_num(s, "alpha_full", p.alpha_full);
      p.horizon_days = get_num(s, "horizon_days", p.horizon_days);
      p.dt = get_num(s, "dt", p.dt);
    }
  }

  try {
    validate(cfg.server);
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

} // namespace

long ExperimentConfig::fstar_resolution() const {
  if (fstar.resolution > 0) return fstar.resolution;
  return objective.name == "covid" ? 4001L : 1000000L;
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.server = ServerConfig{10, 2000, 2, 1.0, 0.5, 0.1, 1.0, 1.0 / 10};
  cfg.seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin,
                                   const ConfigOverrides& ov) {
  // an empty or whitespace-only file means "all defaults"
  bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
  json j;
  if (blank) {
    j = json::object();
  } else {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("config parse error in '" + origin + "': " + e.what());
    }
  }
  return resolve(std::move(j), origin, ov);
}

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& ov) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path, ov);
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["algorithm"] = cfg.algorithm == Algorithm::fedpne      ? "fedpne"
                   : cfg.algorithm == Algorithm::dp_fedpne ? "dp-fedpne"
                                                           : "grid";
  j["preset"] = cfg.preset;
  json o;
  o["name"] = cfg.objective.name;
  if (cfg.objective.name == "doublesine") {
    o["rho1"] = cfg.objective.rho1;
    o["rho2"] = cfg.objective.rho2;
  }
  o["normalize"] = cfg.objective.normalize;
  if (cfg.objective.name == "covid") {
    const SeirParams& p = cfg.objective.seir;
    o["metric"] = cfg.objective.metric == InfectionMetric::cumulative_infected
                      ? "cumulative_infected"
                      : "final_infectious";
    o["seir"] = {{"beta", p.beta},       {"gamma", p.gamma},
                 {"sigma_e", p.sigma_e}, {"N", p.N},
                 {"E0", p.E0},           {"I0", p.I0},
                 {"R0", p.R0},           {"V_full", p.V_full},
                 {"alpha_full", p.alpha_full}, {"horizon_days", p.horizon_days},
                 {"dt", p.dt}};
  }
  j["objective"] = o;
  j["M"] = cfg.server.M;
  j["T"] = cfg.server.T;
  j["k"] = cfg.server.k;
  j["nu1"] = cfg.server.nu1;
  j["rho"] = cfg.server.rho;
  j["c"] = cfg.server.c;
  j["c1"] = cfg.server.c1;
  j["delta"] = cfg.server.delta;
  j["noise"] = {{"kind", cfg.noise.kind == NoiseKind::none ? "none"
                         : cfg.noise.kind == NoiseKind::bounded_uniform
                             ? "bounded_uniform"
                             : "truncated_gaussian"},
                {"scale", cfg.noise.scale}};
  j["perturb_scale"] = cfg.perturb_scale;
  j["dp"] = {{"enabled", cfg.dp.enabled},
             {"epsilon", cfg.dp.epsilon},
             {"delta_dp", cfg.dp.delta_dp},
             {"sigma2", cfg.dp_sigma2}};
  j["seeds"] = cfg.seeds;
  json f;
  if (cfg.fstar.has_value) f["value"] = cfg.fstar.value;
  else f["resolution"] = cfg.fstar_resolution();
  j["fstar"] = f;
  j["grid"] = {{"K", cfg.grid.K}, {"c", cfg.grid.c}};
  return j.dump(2) + "\n";
}

BuiltObjective build_objective(const ExperimentConfig& cfg) {
  Objective raw;
  if (cfg.objective.name == "garland") raw = make_garland();
  else if (cfg.objective.name == "doublesine") raw = make_doublesine(cfg.objective.rho1, cfg.objective.rho2);
  else raw = make_covid_objective(cfg.objective.seir, cfg.objective.metric);

  BuiltObjective built;
  if (cfg.objective.normalize) {
    built.objective = normalize_objective(raw, cfg.fstar_resolution(), &built.scan);
    built.scanned = true;
    built.argmax = built.scan.argmax;
    built.fstar = cfg.fstar.has_value ? cfg.fstar.value : 1.0;  // grid max maps to 1 exactly
  } else {
    built.objective = raw;
    if (cfg.fstar.has_value) {
      built.fstar = cfg.fstar.value;
    } else {
      built.scan = scan_grid(raw, cfg.fstar_resolution());
      built.scanned = true;
      built.fstar = built.scan.max_value;
      built.argmax = built.scan.argmax;
    }
  }
  return built;
}

} // namespace fedpne
