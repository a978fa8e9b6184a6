#ifndef CTXSKILL_RNG_HPP
#define CTXSKILL_RNG_HPP

#include <cstdint>
#include <random>

namespace ctxskill {

// Stateless mixer for deriving independent seeds from (seed, index) pairs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seeded generator with explicit float mappings. std::mt19937_64 output is
// fully specified by the standard, and the mappings below avoid the
// implementation-defined std::uniform_*_distribution, so streams are
// reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform in {0, ..., n-1}. Modulo bias is negligible for n << 2^64.
  std::uint64_t uniform_int(std::uint64_t n) { return eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ctxskill

#endif
