#ifndef SEGUNC_KERNELS_HPP
#define SEGUNC_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// Bit-level kernels underneath the mask arithmetic. Masks are packed
// LSB-first into 64-bit words; trailing bits of the last word are zero.
//
// Every kernel has a scalar reference implementation and may have SIMD
// variants. All variants are pure integer code and must return bit-identical
// results; the active variant is chosen once at startup (CPUID) and can be
// overridden with force_backend() or the SEGUNC_SIMD environment variable
// (values: auto, scalar, avx2).

namespace segunc::kernels {

enum class Backend { scalar, avx2 };

struct Funcs {
    // popcount over a word range
    uint64_t (*count_bits)(const uint64_t* words, size_t n);
    // popcount of (a AND b) and (a OR b) in one pass
    void (*and_or_counts)(const uint64_t* a, const uint64_t* b, size_t n,
                          uint64_t& inter, uint64_t& uni);
    // counts[p] += bit p of the packed array, for p in [0, nbits)
    void (*accumulate_bits)(const uint64_t* words, size_t nbits, uint32_t* counts);
};

// Active implementation table (dispatch decided on first call).
const Funcs& active();
Backend active_backend();

// Pin the backend, e.g. from tests. Throws std::invalid_argument if the
// requested backend is not available on this CPU.
void force_backend(Backend b);

bool avx2_available();

namespace scalar {
uint64_t count_bits(const uint64_t* words, size_t n);
void and_or_counts(const uint64_t* a, const uint64_t* b, size_t n,
                   uint64_t& inter, uint64_t& uni);
void accumulate_bits(const uint64_t* words, size_t nbits, uint32_t* counts);
}  // namespace scalar

namespace avx2 {
// Callable only when avx2_available() is true.
uint64_t count_bits(const uint64_t* words, size_t n);
void and_or_counts(const uint64_t* a, const uint64_t* b, size_t n,
                   uint64_t& inter, uint64_t& uni);
void accumulate_bits(const uint64_t* words, size_t nbits, uint32_t* counts);
}  // namespace avx2

}  // namespace segunc::kernels

#endif
