#ifndef SEGUNC_RNG_HPP
#define SEGUNC_RNG_HPP

#include <cstdint>

// Reproducible 64-bit PRNG with hierarchical substreams.
//
// The generator is SplitMix64: state advances by the golden-gamma constant
// and each output is the finalizer mix64() of the new state. Substreams are
// derived by folding (image, lane, index) into the root seed with mix64,
// so any (seed, image, lane, index) tuple names the same stream in every
// implementation and regardless of generation order.

namespace segunc {

constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // uniform in [0, 1) with 53 random bits
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, n) without modulo bias worth caring about here
    uint64_t next_below(uint64_t n) {
        return uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    uint64_t state_;
};

inline SplitMix64 substream(uint64_t seed, uint64_t image, uint64_t lane, uint64_t index) {
    uint64_t s = mix64(seed + kGoldenGamma);
    s = mix64(s ^ (image * 0xd1342543de82ef95ull + 1));
    s = mix64(s ^ (lane * 0xaf251af3b0f025b5ull + 1));
    s = mix64(s ^ (index * 0x9e3779b97f4a7c15ull + 1));
    return SplitMix64(s);
}

}  // namespace segunc

#endif
