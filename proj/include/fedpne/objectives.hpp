#pragma once
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fedpne/partition.hpp"  // Box
#include "fedpne/seir.hpp"

namespace fedpne {

struct Objective {
  std::string name;
  std::function<double(const std::vector<double>&)> f;
  Box domain;
  int dim() const { return domain.dim(); }
  double operator()(const std::vector<double>& x) const { return f(x); }
};

// classic 1-D benchmark surfaces with many local optima
double garland_raw(double x);
double doublesine_raw(double x, double rho1, double rho2);

Objective make_garland();
Objective make_doublesine(double rho1, double rho2);

// number of people left uninfected, as a fraction, over the dosage domain [0.1, 1]
Objective make_covid_objective(const SeirParams& p, InfectionMetric metric);

// dense uniform grid scan (resolution points per axis); the brute-force oracle
struct GridScan {
  double min_value = 0, max_value = 0;
  std::vector<double> argmax;       // first maximizer in scan order
  double mean_neighbor_gap = 0;     // mean |f(x_{i+1}) - f(x_i)| along the scan
};
GridScan scan_grid(const Objective& obj, long resolution);

// affine rescale to range exactly [0,1] using grid extrema
Objective normalize_objective(const Objective& raw, long resolution, GridScan* info = nullptr);

enum class NoiseKind { none, bounded_uniform, truncated_gaussian };
struct NoiseModel {
  NoiseKind kind = NoiseKind::bounded_uniform;
  double scale = 0.1;
};
// zero-mean draw with support capped at min(scale, f, 1-f): the reward stays in
// [0,1] without clipping, which would bias the mean
double sample_noise(const NoiseModel& nm, double fval, std::mt19937_64& g);

// M client objectives whose exact average is the base function:
// f_m = f + a_m * bump(x) * min(f, 1-f), with sum a_m == 0 exactly
struct ObjectiveEnsemble {
  Objective base;
  std::vector<double> coeff;
  NoiseModel noise;
  int M() const { return (int)coeff.size(); }
  double local_value(int m, const std::vector<double>& x) const;
  double global_value(const std::vector<double>& x) const { return base.f(x); }
  double sample_reward(int m, const std::vector<double>& x, std::mt19937_64& g) const;
};

ObjectiveEnsemble make_ensemble(const Objective& base01, int M, double perturb_scale,
                                const NoiseModel& noise, uint64_t master_seed);

} // namespace fedpne
