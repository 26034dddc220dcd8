#ifndef SPDCLAB_RNG_HPP
#define SPDCLAB_RNG_HPP

//
// Seeded random number generation for reproducible simulations.
//
// Engine: xoshiro256++ 1.0 (Blackman & Vigna), state expanded from the user
// seed with the splitmix64 finalizer. Substreams for sweep grid points are
// derived by mixing (seed, stream index), so per-point results do not depend
// on evaluation order or thread count. The algorithm id below is embedded in
// simulation output metadata.
//

#include <cmath>
#include <cstdint>

namespace spdc {

inline constexpr const char* kRngAlgorithm = "xoshiro256++ 1.0 / splitmix64 seeding";

// splitmix64 finalizer; also used as the seed/stream mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
  }

  // Independent substream for grid point / task `stream`.
  static Xoshiro256pp for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Xoshiro256pp(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exponential with the given mean (inverse CDF; argument of log is in (0,1]).
  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  // Standard normal via the Marsaglia polar method; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    have_spare_ = true;
    return v1 * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spdc

#endif
