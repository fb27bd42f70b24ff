#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "segunc/kernels.hpp"
#include "segunc/rng.hpp"

using namespace segunc;
namespace k = segunc::kernels;

namespace {

std::vector<uint64_t> random_words(size_t n, SplitMix64& rng) {
    std::vector<uint64_t> words(n);
    for (uint64_t& w : words) w = rng.next_u64();
    return words;
}

// bit-at-a-time reference, independent of the shipped kernels
uint64_t naive_count(const std::vector<uint64_t>& words) {
    uint64_t total = 0;
    for (uint64_t w : words)
        for (int b = 0; b < 64; ++b) total += (w >> b) & 1u;
    return total;
}

}  // namespace

TEST_CASE("scalar count_bits matches a bit-at-a-time reference") {
    SplitMix64 rng(101);
    for (size_t n : {size_t{0}, size_t{1}, size_t{3}, size_t{4}, size_t{17}, size_t{256}}) {
        std::vector<uint64_t> words = random_words(n, rng);
        CHECK(k::scalar::count_bits(words.data(), n) == naive_count(words));
    }
}

TEST_CASE("scalar and_or_counts matches per-bit logic") {
    SplitMix64 rng(202);
    for (int rep = 0; rep < 50; ++rep) {
        size_t n = rng.next_below(40);
        std::vector<uint64_t> a = random_words(n, rng);
        std::vector<uint64_t> b = random_words(n, rng);
        uint64_t want_and = 0, want_or = 0;
        for (size_t i = 0; i < n; ++i)
            for (int bit = 0; bit < 64; ++bit) {
                uint64_t ba = (a[i] >> bit) & 1u, bb = (b[i] >> bit) & 1u;
                want_and += ba & bb;
                want_or += ba | bb;
            }
        uint64_t inter = 0, uni = 0;
        k::scalar::and_or_counts(a.data(), b.data(), n, inter, uni);
        CHECK(inter == want_and);
        CHECK(uni == want_or);
    }
}

TEST_CASE("scalar accumulate_bits adds each bit into its counter") {
    SplitMix64 rng(303);
    for (size_t nbits : {size_t{1}, size_t{7}, size_t{64}, size_t{65}, size_t{200},
                         size_t{1024}, size_t{1031}}) {
        size_t n = (nbits + 63) / 64;
        std::vector<uint64_t> words = random_words(n, rng);
        std::vector<uint32_t> counts(nbits, 5);  // nonzero start: must add, not assign
        k::scalar::accumulate_bits(words.data(), nbits, counts.data());
        for (size_t p = 0; p < nbits; ++p)
            CHECK(counts[p] == 5u + ((words[p >> 6] >> (p & 63)) & 1u));
    }
}

TEST_CASE("avx2 kernels are bit-identical to scalar") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available, skipping");
        return;
    }
    SplitMix64 rng(404);
    // sizes straddle the 4-word / 8-bit vector strides to cover the tails
    for (int rep = 0; rep < 200; ++rep) {
        size_t n = rng.next_below(33);
        std::vector<uint64_t> a = random_words(n, rng);
        std::vector<uint64_t> b = random_words(n, rng);

        CHECK(k::avx2::count_bits(a.data(), n) == k::scalar::count_bits(a.data(), n));

        uint64_t si = 0, su = 0, vi = 0, vu = 0;
        k::scalar::and_or_counts(a.data(), b.data(), n, si, su);
        k::avx2::and_or_counts(a.data(), b.data(), n, vi, vu);
        CHECK(vi == si);
        CHECK(vu == su);

        if (n > 0) {
            size_t nbits = n * 64 - rng.next_below(64);
            std::vector<uint32_t> cs(nbits, 0), cv(nbits, 0);
            k::scalar::accumulate_bits(a.data(), nbits, cs.data());
            k::avx2::accumulate_bits(a.data(), nbits, cv.data());
            CHECK(cs == cv);
        }
    }
}

TEST_CASE("avx2 kernels handle sparse and dense extremes") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available, skipping");
        return;
    }
    std::vector<uint64_t> zeros(16, 0);
    std::vector<uint64_t> ones(16, ~uint64_t{0});
    CHECK(k::avx2::count_bits(zeros.data(), zeros.size()) == 0);
    CHECK(k::avx2::count_bits(ones.data(), ones.size()) == 16 * 64);
    uint64_t inter = 0, uni = 0;
    k::avx2::and_or_counts(zeros.data(), ones.data(), 16, inter, uni);
    CHECK(inter == 0);
    CHECK(uni == 16 * 64);
}

TEST_CASE("force_backend switches the active table") {
    k::Backend before = k::active_backend();
    k::force_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    std::vector<uint64_t> w{0xff, 0x1};
    CHECK(k::active().count_bits(w.data(), 2) == 9);
    if (k::avx2_available()) {
        k::force_backend(k::Backend::avx2);
        CHECK(k::active_backend() == k::Backend::avx2);
        CHECK(k::active().count_bits(w.data(), 2) == 9);
    }
    k::force_backend(before);
}
