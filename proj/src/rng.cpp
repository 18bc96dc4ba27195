#include "fedpne/rng.hpp"

#include <cmath>

namespace fedpne {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(uint64_t master, uint64_t s1, uint64_t s2, uint64_t s3) {
  uint64_t s = mix64(master);
  s = mix64(s ^ (s1 * 0xd1342543de82ef95ULL));
  s = mix64(s ^ (s2 * 0xaf251af3b0f025b5ULL));
  s = mix64(s ^ (s3 * 0x9e6c63d0a53a1a4bULL));
  return std::mt19937_64(s);
}

double uniform01(std::mt19937_64& g) {
  return (g() >> 11) * 0x1.0p-53;
}

double uniform_range(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

double gaussian(std::mt19937_64& g) {
  for (;;) {
    double u = 2.0 * uniform01(g) - 1.0;
    double v = 2.0 * uniform01(g) - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0)
      return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double truncated_gaussian(std::mt19937_64& g, double sigma, double a) {
  if (a <= 1e-12) return 0.0;
  if (sigma <= 0.0) return 0.0;
  for (int tries = 0; tries < 256; ++tries) {
    double z = sigma * gaussian(g);
    if (z >= -a && z <= a) return z;
  }
  return uniform_range(g, -a, a);
}

} // namespace fedpne
