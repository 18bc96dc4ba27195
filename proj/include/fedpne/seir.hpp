#pragma once

namespace fedpne {

// Compartmental epidemic model with a constant-rate vaccination channel.
// Vaccination moves alpha(x)*V(x) people per day straight from S to R while
// susceptibles remain; fractional dosage x scales how many people can be
// vaccinated (V ~ 1/x) and how effective the vaccine is (alpha, quadratic,
// zero at half dosage and below).
struct SeirParams {
  double beta = 0.3;          // transmission rate, 1/day
  double gamma = 1.0 / 6.0;   // recovery rate, 1/day
  double sigma_e = 1.0 / 5.2; // exposed -> infectious rate, 1/day
  double N = 1e7;             // total population
  double E0 = 1000, I0 = 100, R0 = 0;
  double V_full = 1e4;        // people vaccinated per day at full dosage
  double alpha_full = 0.9;    // effectiveness at full dosage
  double horizon_days = 180;
  double dt = 0.25;           // RK4 step, days
};

struct SeirResult {
  double S = 0, E = 0, I = 0, R = 0;  // final compartment sizes
  double W = 0;    // people vaccinated straight out of S (never infected)
  double C = 0;    // integral of the infection flow (new infections during the run)
  double peak_I = 0;
  double conservation_err = 0;  // max per-step |S+E+I+R - N|
};

double vaccine_alpha(double dosage, double alpha_full);  // alpha_full * max(0, 2x-1)^2
double vaccine_count(double dosage, double V_full);      // V_full / x

SeirResult simulate_seir(double dosage, const SeirParams& p);

enum class InfectionMetric { cumulative_infected, final_infectious };
double infected_fraction(const SeirResult& r, const SeirParams& p, InfectionMetric metric);

} // namespace fedpne
