#pragma once

#include <cstdint>
#include <random>

namespace polyplan {

// Fixed seed-splitting function, used to derive subordinate seeds from one
// top-level seed so that fixtures are reproducible across implementations.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seedable RNG with bit-portable output. The engine is std::mt19937_64
// (Mersenne Twister, identical sequence on every platform per the standard);
// uniform doubles are built from the raw 64-bit draws directly instead of
// through std::uniform_real_distribution, whose output is
// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Multiply-shift; bias is negligible for n << 2^64.
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace polyplan
