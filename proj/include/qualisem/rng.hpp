#pragma once

#include <cstdint>

namespace qualisem {

// SplitMix64 (Steele, Lea & Flood 2014): 64-bit state, golden-gamma increment.
// Traces are reproducible across implementations that use the same constants.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound > 0. Rejection sampling avoids modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        for (;;) {
            auto v = next();
            if (v < limit) return v % bound;
        }
    }

    // Independent generator for a sub-stream, e.g. one per tick.
    SplitMix64 split(std::uint64_t stream) const {
        SplitMix64 g(state_ ^ (stream * 0xD1B54A32D192ED03ull));
        return SplitMix64(g.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace qualisem
