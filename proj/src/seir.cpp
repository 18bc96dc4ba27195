#include "fedpne/seir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fedpne {

double vaccine_alpha(double dosage, double alpha_full) {
  double t = 2.0 * dosage - 1.0;
  if (t < 0.0) t = 0.0;
  return alpha_full * t * t;
}

double vaccine_count(double dosage, double V_full) {
  if (dosage <= 0.0) throw std::invalid_argument("vaccine dosage must be > 0");
  return V_full / dosage;
}

namespace {

struct State {
  double S, E, I, R, W, C;
};

State deriv(const State& y, const SeirParams& p, double vacc_rate) {
  // the vaccination drain is gated on S > 0 so the constant-rate term cannot
  // keep pulling people out of an empty compartment
  double vacc = y.S > 0.0 ? vacc_rate : 0.0;
  double infect = p.beta * y.S * y.I / p.N;
  State d;
  d.S = -infect - vacc;
  d.E = infect - p.sigma_e * y.E;
  d.I = p.sigma_e * y.E - p.gamma * y.I;
  d.R = p.gamma * y.I + vacc;
  d.W = vacc;
  d.C = infect;
  return d;
}

State axpy(const State& y, double a, const State& d) {
  return {y.S + a * d.S, y.E + a * d.E, y.I + a * d.I,
          y.R + a * d.R, y.W + a * d.W, y.C + a * d.C};
}

} // namespace

SeirResult simulate_seir(double dosage, const SeirParams& p) {
  if (p.dt <= 0.0 || p.horizon_days <= 0.0)
    throw std::invalid_argument("seir horizon and step must be > 0");
  if (p.N <= 0.0) throw std::invalid_argument("seir population must be > 0");
  double vacc_rate = vaccine_alpha(dosage, p.alpha_full) * vaccine_count(dosage, p.V_full);

  State y{p.N - p.E0 - p.I0 - p.R0, p.E0, p.I0, p.R0, 0.0, 0.0};
  if (y.S < 0.0) throw std::invalid_argument("seir initial seeds exceed the population");

  long steps = (long)std::ceil(p.horizon_days / p.dt - 1e-9);
  double cons_err = 0.0, peak = y.I;
  for (long s = 0; s < steps; ++s) {
    double h = p.dt;
    State k1 = deriv(y, p, vacc_rate);
    State k2 = deriv(axpy(y, h / 2, k1), p, vacc_rate);
    State k3 = deriv(axpy(y, h / 2, k2), p, vacc_rate);
    State k4 = deriv(axpy(y, h, k3), p, vacc_rate);
    y.S += h / 6 * (k1.S + 2 * k2.S + 2 * k3.S + k4.S);
    y.E += h / 6 * (k1.E + 2 * k2.E + 2 * k3.E + k4.E);
    y.I += h / 6 * (k1.I + 2 * k2.I + 2 * k3.I + k4.I);
    y.R += h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R);
    y.W += h / 6 * (k1.W + 2 * k2.W + 2 * k3.W + k4.W);
    y.C += h / 6 * (k1.C + 2 * k2.C + 2 * k3.C + k4.C);
    // a step can overshoot S below zero; the excess "vaccinations" never
    // happened, so give them back (keeps S+E+I+R exactly conserved)
    if (y.S < 0.0) {
      y.R += y.S;
      y.W += y.S;
      y.S = 0.0;
    }
    if (y.E < 0.0) { y.R += y.E; y.E = 0.0; }
    if (y.I < 0.0) { y.R += y.I; y.I = 0.0; }
    cons_err = std::max(cons_err, std::fabs(y.S + y.E + y.I + y.R - p.N));
    peak = std::max(peak, y.I);
  }
  return {y.S, y.E, y.I, y.R, y.W, y.C, peak, cons_err};
}

double infected_fraction(const SeirResult& r, const SeirParams& p, InfectionMetric metric) {
  if (metric == InfectionMetric::final_infectious) return r.I / p.N;
  // seeds plus the integrated infection flow: everyone who ever entered E or I
  return (p.E0 + p.I0 + r.C) / p.N;
}

} // namespace fedpne
