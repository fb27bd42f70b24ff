#ifndef SEGUNC_PAIRWISE_SUM_HPP
#define SEGUNC_PAIRWISE_SUM_HPP

#include <cstddef>
#include <span>

namespace segunc {

// Pairwise (tree) summation over terms produced by f(k), k in [0, n).
// The reduction tree is fixed by n alone, so results are reproducible
// regardless of where the terms come from.
template <class F>
double pairwise_sum(size_t begin, size_t end, F&& f) {
    size_t n = end - begin;
    if (n <= 16) {
        double s = 0.0;
        for (size_t k = begin; k < end; ++k) s += f(k);
        return s;
    }
    size_t mid = begin + n / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

inline double pairwise_sum(std::span<const double> values) {
    return pairwise_sum(size_t{0}, values.size(), [&](size_t k) { return values[k]; });
}

}  // namespace segunc

#endif
