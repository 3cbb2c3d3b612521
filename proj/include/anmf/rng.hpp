#pragma once

#include <cstdint>
#include <random>

#include "anmf/types.hpp"

namespace anmf {

// Disjoint, order-independent RNG substreams. Every (master seed, trial,
// role) triple maps to an independent engine, so concurrent trials produce
// identical output regardless of scheduling.
enum class StreamRole : std::uint64_t {
  Secondary = 0x5345434Full,    // secondary-data speckle
  Texture = 0x54455854ull,      // secondary-data textures
  Primary = 0x5052494Dull,      // primary draws (H0 clutter, then H1 clutter)
  Calibration = 0x43414C42ull,  // salt for threshold-calibration runs
};

std::uint64_t splitmix64(std::uint64_t x);

std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t trial,
                          StreamRole role);

// Uniform on (0, 1] (never 0, so log() is safe).
double uniform01(std::mt19937_64& eng);

// Box-Muller pair of independent N(0,1) draws. Hand-rolled so the stream is
// a function of the engine output alone, not of the standard library's
// unspecified normal_distribution algorithm.
void standard_normal_pair(std::mt19937_64& eng, double& z0, double& z1);

// N i.i.d. circularly-symmetric complex normal entries with unit complex
// variance (real and imaginary parts each N(0, 1/2)).
Vec complex_normal_vector(std::mt19937_64& eng, int N);

}  // namespace anmf
