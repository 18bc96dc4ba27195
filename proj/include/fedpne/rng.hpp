#pragma once
#include <cstdint>
#include <random>

namespace fedpne {

// Seed-material mixer (splitmix64). Only used to derive substream seeds.
uint64_t mix64(uint64_t x);

// Derive an independent engine from a master seed plus up to three salts
// (purpose tag, client id, phase index). The same key always yields the same
// stream regardless of what other streams were drawn from, which is what makes
// whole runs replayable from one integer seed.
std::mt19937_64 substream(uint64_t master, uint64_t s1, uint64_t s2 = 0, uint64_t s3 = 0);

// Uniform in [0,1) built from the engine's raw output; identical bits on any
// conforming implementation (mt19937_64 output is standardized).
double uniform01(std::mt19937_64& g);
double uniform_range(std::mt19937_64& g, double lo, double hi);

// Standard normal via Marsaglia polar (sqrt/log only, no trig). Draws pairs and
// discards the spare: stateless, so call sites stay order-independent.
double gaussian(std::mt19937_64& g);

// Zero-mean draw from N(0, sigma^2) conditioned on [-a, a]; falls back to
// uniform on [-a, a] if rejection fails to land (keeps the support bound hard).
double truncated_gaussian(std::mt19937_64& g, double sigma, double a);

} // namespace fedpne
