#pragma once

#include <cstdint>

namespace zsgame {

/**
 * Counter-based uniform generator: the splitmix64 finalizer applied to
 * seed + k * golden gamma for counter k. Stateless apart from the counter,
 * so streams are reproducible across platforms and safe to split by seed
 * offset. The exact stream is part of this library's compatibility contract.
 */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /** Uniform double in [0, 1) with 53 significant bits. */
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace zsgame
