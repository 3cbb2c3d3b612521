#include "anmf/rng.hpp"

#include <cmath>
#include <numbers>

namespace anmf {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t trial,
                          StreamRole role) {
  // chain splitmix64 over the key, then expand to a few seed words;
  // seed_seq's generate() is fully specified by the standard, so this is
  // reproducible everywhere
  std::uint64_t s = splitmix64(master_seed ^ 0x243F6A8885A308D3ull);
  s = splitmix64(s ^ trial);
  s = splitmix64(s ^ static_cast<std::uint64_t>(role));
  std::uint64_t w0 = splitmix64(s), w1 = splitmix64(w0), w2 = splitmix64(w1),
                w3 = splitmix64(w2);
  std::seed_seq seq{static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
                    static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32),
                    static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2 >> 32),
                    static_cast<std::uint32_t>(w3), static_cast<std::uint32_t>(w3 >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& eng) {
  // 53-bit mantissa, shifted into (0, 1]
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

void standard_normal_pair(std::mt19937_64& eng, double& z0, double& z1) {
  const double u1 = uniform01(eng);
  const double u2 = uniform01(eng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  z0 = r * std::cos(phi);
  z1 = r * std::sin(phi);
}

Vec complex_normal_vector(std::mt19937_64& eng, int N) {
  Vec v(N);
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  for (int k = 0; k < N; ++k) {
    double z0, z1;
    standard_normal_pair(eng, z0, z1);
    v[k] = cxd(z0 * inv_sqrt2, z1 * inv_sqrt2);
  }
  return v;
}

}  // namespace anmf
