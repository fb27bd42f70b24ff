#ifndef SEGUNC_MASK_HPP
#define SEGUNC_MASK_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace segunc {

struct GridShape {
    uint32_t height = 0;
    uint32_t width = 0;

    uint64_t pixels() const { return uint64_t(height) * uint64_t(width); }
    bool operator==(const GridShape&) const = default;
};

// Binary foreground/background grid, row-major, packed LSB-first into
// 64-bit words. true = foreground. Trailing bits of the last word stay zero.
class BinaryMask {
public:
    explicit BinaryMask(GridShape shape);

    // value >= threshold marks foreground
    static BinaryMask from_bytes(GridShape shape, std::span<const uint8_t> values,
                                 uint8_t threshold);

    const GridShape& shape() const { return shape_; }

    bool get(uint32_t row, uint32_t col) const {
        uint64_t p = bit_index(row, col);
        return ((words_[p >> 6] >> (p & 63)) & 1u) != 0;
    }

    void set(uint32_t row, uint32_t col, bool foreground) {
        uint64_t p = bit_index(row, col);
        uint64_t bit = uint64_t(1) << (p & 63);
        if (foreground)
            words_[p >> 6] |= bit;
        else
            words_[p >> 6] &= ~bit;
    }

    uint64_t foreground_count() const;

    std::span<const uint64_t> words() const { return words_; }

    bool operator==(const BinaryMask&) const = default;

private:
    uint64_t bit_index(uint32_t row, uint32_t col) const {
        return uint64_t(row) * shape_.width + col;
    }

    GridShape shape_;
    std::vector<uint64_t> words_;
};

// Ordered list of same-shape masks; order is significant for index pairing.
class SampleSet {
public:
    explicit SampleSet(std::vector<BinaryMask> masks);

    const GridShape& shape() const { return shape_; }
    size_t size() const { return masks_.size(); }
    const BinaryMask& operator[](size_t i) const { return masks_[i]; }
    const std::vector<BinaryMask>& masks() const { return masks_; }

    size_t empty_mask_count() const;
    double empty_fraction() const;

private:
    GridShape shape_;
    std::vector<BinaryMask> masks_;
};

bool is_empty(const BinaryMask& mask);

// |a n b| / |a u b|; nullopt when both masks are empty (0/0).
std::optional<double> iou(const BinaryMask& a, const BinaryMask& b);

// Jaccard distance 1 - IoU, with d = 0 when both masks are empty.
double d_iou(const BinaryMask& a, const BinaryMask& b);

// Emptiness-mismatch kernel: 1 iff exactly one of the masks is empty.
double k_det(const BinaryMask& a, const BinaryMask& b);

// Subsequence of the non-empty masks; nullopt when none survive.
std::optional<SampleSet> filter_nonempty(const SampleSet& s);

}  // namespace segunc

#endif
