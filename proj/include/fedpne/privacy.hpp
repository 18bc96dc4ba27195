#pragma once
#include <random>
#include <utility>

namespace fedpne {

struct DpConfig {
  bool enabled = false;
  double epsilon = 1.0;
  double delta_dp = 0.05;
};

// Gaussian-mechanism noise variance sigma^2 = 2*ln(1.25/delta)/epsilon^2.
// Each per-pull reward gets an independent N(0, sigma^2) added before local
// averaging; node statistics are queried once, so one calibration suffices.
double dp_sigma(double epsilon, double delta_dp);

// confidence constants that absorb the extra noise:
// c = sqrt(4 + 16*sigma^2), c1 = (2M)^(1/8)
std::pair<double, double> dp_constants(double sigma2, int M);

// reward with privacy noise added; never clamped (clamping would bias means)
double privatize_reward(double reward, double sigma2, std::mt19937_64& g);

} // namespace fedpne
