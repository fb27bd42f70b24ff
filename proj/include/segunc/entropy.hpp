#ifndef SEGUNC_ENTROPY_HPP
#define SEGUNC_ENTROPY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "segunc/mask.hpp"

namespace segunc {

// Row-major grid of probabilities in [0, 1]. Values within 1e-9 of the
// interval are clamped on construction; anything further out is rejected.
class ProbMap {
public:
    ProbMap(GridShape shape, std::vector<double> values);

    const GridShape& shape() const { return shape_; }
    const std::vector<double>& values() const { return values_; }
    double at(uint32_t row, uint32_t col) const {
        return values_[uint64_t(row) * shape_.width + col];
    }

private:
    GridShape shape_;
    std::vector<double> values_;
};

enum class LogBase { two, natural };

// Binary entropy values; [0, 1] for base two, [0, ln 2] for natural log.
struct EntropyMap {
    GridShape shape;
    std::vector<double> values;
    LogBase base = LogBase::two;

    double at(uint32_t row, uint32_t col) const {
        return values[uint64_t(row) * shape.width + col];
    }
};

double max_entropy(LogBase base);

// Per-pixel foreground fraction across the set.
ProbMap mean_map(const SampleSet& s);

// Per-pixel H(p) = -p log p - (1-p) log(1-p), with 0 log 0 = 0.
EntropyMap entropy_map(const ProbMap& p, LogBase base = LogBase::two);

// Pixel-wise mean of several probability maps.
ProbMap mean_probmap(std::span<const ProbMap> maps);

// Diagnostic alternative to entropy_map(mean_probmap(...)): the mean of
// the per-map entropies instead of the entropy of the mean.
EntropyMap mean_of_entropies(std::span<const ProbMap> maps, LogBase base = LogBase::two);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    uint64_t count = 0;
};

// Equal-width bins over [0, max_entropy(base)]; the last bin is
// right-closed so the maximum lands in it. Counts sum to the pixel count.
std::vector<HistogramBin> entropy_histogram(const EntropyMap& e, uint32_t bins);

}  // namespace segunc

#endif
