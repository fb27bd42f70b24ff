#include "segunc/kernels.hpp"

#include <bit>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace segunc::kernels::avx2 {

// Nibble-LUT popcount of 32 bytes, summed into four 64-bit lanes.
__attribute__((target("avx2"))) static inline __m256i popcnt256(__m256i v) {
    const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

__attribute__((target("avx2"))) static inline uint64_t hsum_epi64(__m256i v) {
    __m128i lo = _mm256_castsi256_si128(v);
    __m128i hi = _mm256_extracti128_si256(v, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<uint64_t>(_mm_extract_epi64(s, 0)) +
           static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

__attribute__((target("avx2"))) uint64_t count_bits(const uint64_t* words, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
        acc = _mm256_add_epi64(acc, popcnt256(v));
    }
    uint64_t total = hsum_epi64(acc);
    for (; i < n; ++i) total += std::popcount(words[i]);
    return total;
}

__attribute__((target("avx2"))) void and_or_counts(const uint64_t* a, const uint64_t* b,
                                                   size_t n, uint64_t& inter, uint64_t& uni) {
    __m256i acc_and = _mm256_setzero_si256();
    __m256i acc_or = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc_and = _mm256_add_epi64(acc_and, popcnt256(_mm256_and_si256(va, vb)));
        acc_or = _mm256_add_epi64(acc_or, popcnt256(_mm256_or_si256(va, vb)));
    }
    uint64_t ic = hsum_epi64(acc_and);
    uint64_t uc = hsum_epi64(acc_or);
    for (; i < n; ++i) {
        ic += std::popcount(a[i] & b[i]);
        uc += std::popcount(a[i] | b[i]);
    }
    inter = ic;
    uni = uc;
}

// One byte of the packed mask maps to eight u32 counters: broadcast the
// byte, isolate each bit lane, and subtract the 0/-1 compare mask.
__attribute__((target("avx2"))) void accumulate_bits(const uint64_t* words, size_t nbits,
                                                     uint32_t* counts) {
    const __m256i bitsel = _mm256_setr_epi32(1, 2, 4, 8, 16, 32, 64, 128);
    // x86 is little-endian, so byte i of the word array covers bits [8i, 8i+8).
    const auto* bytes = reinterpret_cast<const uint8_t*>(words);
    size_t nbytes = nbits / 8;
    for (size_t i = 0; i < nbytes; ++i) {
        __m256i vb = _mm256_set1_epi32(bytes[i]);
        __m256i hit = _mm256_and_si256(vb, bitsel);
        __m256i mask = _mm256_cmpeq_epi32(hit, bitsel);
        __m256i c = _mm256_loadu_si256(reinterpret_cast<__m256i*>(counts + 8 * i));
        c = _mm256_sub_epi32(c, mask);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + 8 * i), c);
    }
    for (size_t p = nbytes * 8; p < nbits; ++p)
        counts[p] += static_cast<uint32_t>((words[p >> 6] >> (p & 63)) & 1u);
}

}  // namespace segunc::kernels::avx2

#else  // non-x86: scalar fallback keeps the symbols defined

namespace segunc::kernels::avx2 {

uint64_t count_bits(const uint64_t* words, size_t n) { return scalar::count_bits(words, n); }

void and_or_counts(const uint64_t* a, const uint64_t* b, size_t n, uint64_t& inter,
                   uint64_t& uni) {
    scalar::and_or_counts(a, b, n, inter, uni);
}

void accumulate_bits(const uint64_t* words, size_t nbits, uint32_t* counts) {
    scalar::accumulate_bits(words, nbits, counts);
}

}  // namespace segunc::kernels::avx2

#endif
