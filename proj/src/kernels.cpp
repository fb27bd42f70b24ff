#include "segunc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace segunc::kernels {

bool avx2_available() {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

constexpr Funcs kScalar{scalar::count_bits, scalar::and_or_counts, scalar::accumulate_bits};
constexpr Funcs kAvx2{avx2::count_bits, avx2::and_or_counts, avx2::accumulate_bits};

Backend initial_backend() {
    const char* env = std::getenv("SEGUNC_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
        // "auto" or anything unrecognized falls through to detection
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{initial_backend()};
    return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw std::invalid_argument("kernels: AVX2 backend not available on this CPU");
    backend_slot().store(b, std::memory_order_relaxed);
}

const Funcs& active() {
    return active_backend() == Backend::avx2 ? kAvx2 : kScalar;
}

}  // namespace segunc::kernels
