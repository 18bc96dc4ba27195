#include "fedpne/privacy.hpp"

#include <cmath>
#include <stdexcept>

#include "fedpne/rng.hpp"

namespace fedpne {

double dp_sigma(double epsilon, double delta_dp) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("dp epsilon must be > 0");
  if (!(delta_dp > 0.0 && delta_dp < 1.0)) throw std::invalid_argument("dp delta must lie in (0,1)");
  return 2.0 * std::log(1.25 / delta_dp) / (epsilon * epsilon);
}

std::pair<double, double> dp_constants(double sigma2, int M) {
  if (sigma2 < 0.0) throw std::invalid_argument("dp sigma^2 must be >= 0");
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  return {std::sqrt(4.0 + 16.0 * sigma2), std::pow(2.0 * M, 1.0 / 8.0)};
}

double privatize_reward(double reward, double sigma2, std::mt19937_64& g) {
  if (sigma2 < 0.0) throw std::invalid_argument("dp sigma^2 must be >= 0");
  if (sigma2 == 0.0) return reward;
  return reward + std::sqrt(sigma2) * gaussian(g);
}

} // namespace fedpne
