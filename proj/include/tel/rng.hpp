#ifndef TEL_RNG_HPP
#define TEL_RNG_HPP

#include <cstdint>
#include <random>

namespace tel {

/// Seeded generator with platform-independent derived draws. The
/// standard distributions are implementation-defined, so uniform draws
/// are built from raw 64-bit outputs directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    if (n == 0) return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Stable per-replica stream derived from a base seed.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 step over the combined value.
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tel

#endif  // TEL_RNG_HPP
