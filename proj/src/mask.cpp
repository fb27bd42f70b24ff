#include "segunc/mask.hpp"

#include <stdexcept>

#include "segunc/kernels.hpp"

namespace segunc {

namespace {

size_t word_count(GridShape shape) { return size_t((shape.pixels() + 63) / 64); }

void require_valid(GridShape shape) {
    if (shape.height == 0 || shape.width == 0)
        throw std::invalid_argument("GridShape: height and width must be >= 1");
}

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
    if (!(a.shape() == b.shape()))
        throw std::invalid_argument("mask shape mismatch");
}

}  // namespace

BinaryMask::BinaryMask(GridShape shape) : shape_(shape) {
    require_valid(shape);
    words_.assign(word_count(shape), 0);
}

BinaryMask BinaryMask::from_bytes(GridShape shape, std::span<const uint8_t> values,
                                  uint8_t threshold) {
    require_valid(shape);
    if (values.size() != shape.pixels())
        throw std::invalid_argument("BinaryMask::from_bytes: value count does not match shape");
    BinaryMask m(shape);
    for (uint64_t p = 0; p < values.size(); ++p)
        if (values[p] >= threshold) m.words_[p >> 6] |= uint64_t(1) << (p & 63);
    return m;
}

uint64_t BinaryMask::foreground_count() const {
    return kernels::active().count_bits(words_.data(), words_.size());
}

SampleSet::SampleSet(std::vector<BinaryMask> masks) : masks_(std::move(masks)) {
    if (masks_.empty()) throw std::invalid_argument("SampleSet: at least one mask required");
    shape_ = masks_.front().shape();
    for (const BinaryMask& m : masks_)
        if (!(m.shape() == shape_))
            throw std::invalid_argument("SampleSet: all masks must share one shape");
}

size_t SampleSet::empty_mask_count() const {
    size_t n = 0;
    for (const BinaryMask& m : masks_)
        if (is_empty(m)) ++n;
    return n;
}

double SampleSet::empty_fraction() const {
    return double(empty_mask_count()) / double(size());
}

bool is_empty(const BinaryMask& mask) {
    for (uint64_t w : mask.words())
        if (w != 0) return false;
    return true;
}

std::optional<double> iou(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b);
    uint64_t inter = 0, uni = 0;
    kernels::active().and_or_counts(a.words().data(), b.words().data(), a.words().size(),
                                    inter, uni);
    if (uni == 0) return std::nullopt;
    return double(inter) / double(uni);
}

double d_iou(const BinaryMask& a, const BinaryMask& b) {
    std::optional<double> j = iou(a, b);
    if (!j.has_value()) return 0.0;  // both empty
    return 1.0 - *j;
}

double k_det(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b);
    return is_empty(a) != is_empty(b) ? 1.0 : 0.0;
}

std::optional<SampleSet> filter_nonempty(const SampleSet& s) {
    std::vector<BinaryMask> kept;
    for (const BinaryMask& m : s.masks())
        if (!is_empty(m)) kept.push_back(m);
    if (kept.empty()) return std::nullopt;
    return SampleSet(std::move(kept));
}

}  // namespace segunc
