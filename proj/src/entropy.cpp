#include "segunc/entropy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "segunc/kernels.hpp"

namespace segunc {

ProbMap::ProbMap(GridShape shape, std::vector<double> values)
    : shape_(shape), values_(std::move(values)) {
    if (shape_.height == 0 || shape_.width == 0)
        throw std::invalid_argument("ProbMap: degenerate shape");
    if (values_.size() != shape_.pixels())
        throw std::invalid_argument("ProbMap: value count does not match shape");
    for (double& v : values_) {
        if (v < -1e-9 || v > 1.0 + 1e-9 || std::isnan(v))
            throw std::invalid_argument("ProbMap: value outside [0, 1]");
        if (v < 0.0) v = 0.0;
        if (v > 1.0) v = 1.0;
    }
}

double max_entropy(LogBase base) {
    return base == LogBase::two ? 1.0 : std::numbers::ln2;
}

ProbMap mean_map(const SampleSet& s) {
    const uint64_t pixels = s.shape().pixels();
    std::vector<uint32_t> counts(pixels, 0);
    const auto& acc = kernels::active().accumulate_bits;
    for (const BinaryMask& m : s.masks()) acc(m.words().data(), pixels, counts.data());
    std::vector<double> values(pixels);
    // divide, do not multiply by a reciprocal: count == n must give exactly 1
    const double n = double(s.size());
    for (uint64_t p = 0; p < pixels; ++p) values[p] = double(counts[p]) / n;
    return ProbMap(s.shape(), std::move(values));
}

namespace {

double binary_entropy(double p, LogBase base) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    double h = -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
    if (base == LogBase::two) h /= std::numbers::ln2;
    return h < 0.0 ? 0.0 : h;
}

}  // namespace

EntropyMap entropy_map(const ProbMap& p, LogBase base) {
    EntropyMap e{p.shape(), std::vector<double>(p.values().size()), base};
    for (size_t i = 0; i < e.values.size(); ++i)
        e.values[i] = binary_entropy(p.values()[i], base);
    return e;
}

ProbMap mean_probmap(std::span<const ProbMap> maps) {
    if (maps.empty()) throw std::invalid_argument("mean_probmap: no maps given");
    const GridShape shape = maps.front().shape();
    for (const ProbMap& m : maps)
        if (!(m.shape() == shape))
            throw std::invalid_argument("mean_probmap: shape mismatch");
    std::vector<double> sum(shape.pixels(), 0.0);
    for (const ProbMap& m : maps)
        for (size_t i = 0; i < sum.size(); ++i) sum[i] += m.values()[i];
    const double inv = 1.0 / double(maps.size());
    for (double& v : sum) v *= inv;
    return ProbMap(shape, std::move(sum));
}

EntropyMap mean_of_entropies(std::span<const ProbMap> maps, LogBase base) {
    if (maps.empty()) throw std::invalid_argument("mean_of_entropies: no maps given");
    const GridShape shape = maps.front().shape();
    EntropyMap out{shape, std::vector<double>(shape.pixels(), 0.0), base};
    for (const ProbMap& m : maps) {
        if (!(m.shape() == shape))
            throw std::invalid_argument("mean_of_entropies: shape mismatch");
        for (size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += binary_entropy(m.values()[i], base);
    }
    const double inv = 1.0 / double(maps.size());
    for (double& v : out.values) v *= inv;
    return out;
}

std::vector<HistogramBin> entropy_histogram(const EntropyMap& e, uint32_t bins) {
    if (bins == 0) throw std::invalid_argument("entropy_histogram: bins must be >= 1");
    const double range = max_entropy(e.base);
    const double width = range / double(bins);
    std::vector<HistogramBin> hist(bins);
    for (uint32_t b = 0; b < bins; ++b) {
        hist[b].lo = width * b;
        hist[b].hi = b + 1 == bins ? range : width * (b + 1);
    }
    for (double v : e.values) {
        auto b = size_t(v / width);
        if (b >= bins) b = bins - 1;  // right-closed last bin
        ++hist[b].count;
    }
    return hist;
}

}  // namespace segunc
