#pragma once
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fedpne/objectives.hpp"
#include "fedpne/privacy.hpp"
#include "fedpne/protocol.hpp"
#include "fedpne/seir.hpp"

namespace fedpne {

enum class Algorithm { fedpne, dp_fedpne, grid };

struct ObjectiveConfig {
  std::string name = "garland";  // garland | doublesine | covid
  double rho1 = 0.3, rho2 = 0.8; // doublesine shape parameters
  bool normalize = true;
  SeirParams seir;               // covid
  InfectionMetric metric = InfectionMetric::cumulative_infected;
};

struct FstarConfig {
  bool has_value = false;  // explicit value beats the grid oracle
  double value = 1.0;
  long resolution = 0;     // 0 = per-objective default
};

struct GridConfig {
  int K = 100;
  double c = std::numbers::sqrt2;
};

// Fully resolved experiment description: defaults filled, preset and privacy
// constants applied, every field validated.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::fedpne;
  std::string preset = "experimental";  // experimental | theory
  ObjectiveConfig objective;
  ServerConfig server;
  NoiseModel noise;
  double perturb_scale = 1.0;
  DpConfig dp;
  double dp_sigma2 = 0.0;  // resolved when dp is enabled
  std::vector<uint64_t> seeds;
  FstarConfig fstar;
  GridConfig grid;

  long fstar_resolution() const;  // configured, or the per-objective default
};

ExperimentConfig default_config();

// Optional overrides applied before resolution (CLI flags)
struct ConfigOverrides {
  std::string algorithm;  // empty = keep
  std::string preset;
  bool has_seed = false;
  uint64_t seed = 0;
};

ExperimentConfig load_config(const std::string& path, const ConfigOverrides& ov = {});
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin,
                                   const ConfigOverrides& ov = {});
std::string config_to_json(const ExperimentConfig& cfg);  // resolved echo, stable key order

struct BuiltObjective {
  Objective objective;  // normalized when the config asks for it
  bool scanned = false;
  GridScan scan;        // raw-objective grid scan (when one happened)
  double fstar = 1.0;
  std::vector<double> argmax;
};
BuiltObjective build_objective(const ExperimentConfig& cfg);

} // namespace fedpne
