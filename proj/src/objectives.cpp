#include "fedpne/objectives.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fedpne/rng.hpp"

namespace fedpne {

double garland_raw(double x) {
  return x * (1.0 - x) * (4.0 - std::sqrt(std::fabs(std::sin(60.0 * x))));
}

double doublesine_raw(double x, double rho1, double rho2) {
  double u = std::fabs(2.0 * x - 1.0);
  if (u == 0.0) return 0.0;  // all power terms vanish in the limit
  double e1 = -std::log2(rho1), e2 = -std::log2(rho2);
  double p1 = std::pow(u, e1), p2 = std::pow(u, e2);
  double t = 0.5 * std::log2(u);
  double s = std::sin(2.0 * std::numbers::pi * t);
  if (s < 0.0) s = 0.0;
  return s * (p2 - p1) - p1;
}

Objective make_garland() {
  return {"garland", [](const std::vector<double>& x) { return garland_raw(x[0]); },
          Box{{0.0}, {1.0}}};
}

Objective make_doublesine(double rho1, double rho2) {
  if (!(rho1 > 0.0 && rho1 < 1.0) || !(rho2 > 0.0 && rho2 < 1.0))
    throw std::invalid_argument("doublesine rho1 and rho2 must lie in (0,1)");
  return {"doublesine",
          [rho1, rho2](const std::vector<double>& x) { return doublesine_raw(x[0], rho1, rho2); },
          Box{{0.0}, {1.0}}};
}

Objective make_covid_objective(const SeirParams& p, InfectionMetric metric) {
  return {"covid",
          [p, metric](const std::vector<double>& x) {
            return 1.0 - infected_fraction(simulate_seir(x[0], p), p, metric);
          },
          Box{{0.1}, {1.0}}};
}

GridScan scan_grid(const Objective& obj, long resolution) {
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  int D = obj.dim();
  double total_d = std::pow((double)resolution, D);
  if (total_d > 2e8)
    throw std::invalid_argument("grid scan infeasible at this resolution/dimension; supply fstar explicitly");

  GridScan out;
  std::vector<long> idx(D, 0);
  std::vector<double> x(D);
  bool first = true;
  double prev = 0.0;
  double gap_sum = 0.0;
  long count = 0;
  for (;;) {
    for (int d = 0; d < D; ++d) {
      double t = (double)idx[d] / (double)(resolution - 1);
      x[d] = obj.domain.lo[d] + (obj.domain.hi[d] - obj.domain.lo[d]) * t;
    }
    double v = obj.f(x);
    if (first) {
      out.min_value = out.max_value = v;
      out.argmax = x;
      first = false;
    } else {
      if (v < out.min_value) out.min_value = v;
      if (v > out.max_value) {
        out.max_value = v;
        out.argmax = x;
      }
      gap_sum += std::fabs(v - prev);
    }
    prev = v;
    ++count;
    int d = 0;
    while (d < D && ++idx[d] == resolution) {
      idx[d] = 0;
      ++d;
    }
    if (d == D) break;
  }
  if (count > 1) out.mean_neighbor_gap = gap_sum / (double)(count - 1);
  return out;
}

Objective normalize_objective(const Objective& raw, long resolution, GridScan* info) {
  GridScan scan = scan_grid(raw, resolution);
  double range = scan.max_value - scan.min_value;
  if (!(range > 1e-12 * std::max(1.0, std::fabs(scan.max_value))))
    throw std::runtime_error("objective '" + raw.name + "' is degenerate (constant on the grid); cannot normalize");
  if (info) *info = scan;
  double lo = scan.min_value;
  auto inner = raw.f;
  return {raw.name, [inner, lo, range](const std::vector<double>& x) { return (inner(x) - lo) / range; },
          raw.domain};
}

double sample_noise(const NoiseModel& nm, double fval, std::mt19937_64& g) {
  if (nm.kind == NoiseKind::none) return 0.0;
  double amp = std::min(nm.scale, std::min(fval, 1.0 - fval));
  if (amp <= 1e-12) return 0.0;
  if (nm.kind == NoiseKind::bounded_uniform) return uniform_range(g, -amp, amp);
  return truncated_gaussian(g, nm.scale, amp);
}

double ObjectiveEnsemble::local_value(int m, const std::vector<double>& x) const {
  double fv = base.f(x);
  double a = coeff[m];
  if (a == 0.0) return fv;
  double margin = std::min(fv, 1.0 - fv);
  if (margin <= 0.0) return fv;
  double bump = 1.0;
  for (int d = 0; d < base.dim(); ++d) {
    double u = (x[d] - base.domain.lo[d]) / (base.domain.hi[d] - base.domain.lo[d]);
    double s = std::sin(std::numbers::pi * u);
    bump *= s * s;
  }
  return fv + a * bump * margin;
}

double ObjectiveEnsemble::sample_reward(int m, const std::vector<double>& x, std::mt19937_64& g) const {
  double v = local_value(m, x);
  return v + sample_noise(noise, v, g);
}

ObjectiveEnsemble make_ensemble(const Objective& base01, int M, double perturb_scale,
                                const NoiseModel& noise, uint64_t master_seed) {
  if (M < 1) throw std::invalid_argument("ensemble needs at least one client");
  if (perturb_scale < 0.0) throw std::invalid_argument("perturb_scale must be >= 0");
  ObjectiveEnsemble e{base01, std::vector<double>(M, 0.0), noise};
  if (perturb_scale == 0.0 || M == 1) return e;

  auto g = substream(master_seed, /*purpose=*/1);
  std::vector<double> z(M);
  double mean = 0.0;
  for (int m = 0; m < M; ++m) {
    z[m] = gaussian(g);
    mean += z[m];
  }
  mean /= M;
  double amax = 0.0;
  for (int m = 0; m < M; ++m) {
    z[m] = perturb_scale * (z[m] - mean);
    amax = std::max(amax, std::fabs(z[m]));
  }
  // keep |a_m| strictly below 1 so f_m stays inside [0,1] by construction
  const double cap = 1.0 - 1e-9;
  if (amax > cap)
    for (int m = 0; m < M; ++m) z[m] *= cap / amax;
  // recompute the last coefficient so the sum is exactly zero in floating point
  double partial = 0.0;
  for (int m = 0; m < M - 1; ++m) {
    e.coeff[m] = z[m];
    partial += z[m];
  }
  e.coeff[M - 1] = -partial;
  return e;
}

} // namespace fedpne
