#pragma once

#include <cstdint>
#include <random>

namespace polartri {

// splitmix64 finalizer; used to derive independent per-trial seeds.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t stream_seed(uint64_t seed, uint64_t stream, uint64_t substream = 0) {
    return mix64(mix64(mix64(seed) ^ stream) ^ substream);
}

// std::mt19937_64's output sequence is fixed by the standard; the distribution helpers below
// are written out so results do not depend on the standard library implementation.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {}
    Rng(uint64_t seed, uint64_t stream, uint64_t substream = 0) : engine_(stream_seed(seed, stream, substream)) {}

    uint64_t next() { return engine_(); }
    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    // Uniform in [0, bound); rejection sampling keeps it unbiased.
    uint64_t below(uint64_t bound) {
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace polartri
