#pragma once

#include <cstdint>

namespace cyclotrace {

// splitmix64; used instead of <random> distributions so that seeded runs are
// byte-identical across compilers and platforms.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // unbiased value in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v >= threshold) return v % bound;
        }
    }

    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

} // namespace cyclotrace
