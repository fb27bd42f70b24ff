#include "segunc/kernels.hpp"

#include <bit>

namespace segunc::kernels::scalar {

uint64_t count_bits(const uint64_t* words, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i) total += std::popcount(words[i]);
    return total;
}

void and_or_counts(const uint64_t* a, const uint64_t* b, size_t n,
                   uint64_t& inter, uint64_t& uni) {
    uint64_t ic = 0, uc = 0;
    for (size_t i = 0; i < n; ++i) {
        ic += std::popcount(a[i] & b[i]);
        uc += std::popcount(a[i] | b[i]);
    }
    inter = ic;
    uni = uc;
}

void accumulate_bits(const uint64_t* words, size_t nbits, uint32_t* counts) {
    for (size_t p = 0; p < nbits; ++p)
        counts[p] += static_cast<uint32_t>((words[p >> 6] >> (p & 63)) & 1u);
}

}  // namespace segunc::kernels::scalar
