#include "segunc/ged.hpp"

#include <algorithm>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "segunc/pairwise_sum.hpp"
#include "segunc/rng.hpp"

namespace segunc {

const char* to_string(EstimatorKind kind) {
    return kind == EstimatorKind::inclusive ? "inclusive" : "unbiased";
}

std::optional<EstimatorKind> estimator_from_string(std::string_view name) {
    if (name == "inclusive") return EstimatorKind::inclusive;
    if (name == "unbiased") return EstimatorKind::unbiased;
    return std::nullopt;
}

namespace {

double pair_distance(PairDistance distance, const BinaryMask& a, const BinaryMask& b) {
    return distance == PairDistance::iou_distance ? d_iou(a, b) : k_det(a, b);
}

// Terms are sorted before the tree sum, so a pair mean depends only on the
// multiset of distances. That makes every estimate bit-identical under mask
// reordering, and with a == b the cross and self means coincide, so
// ged(S, S) cancels to exactly zero.
double sorted_mean(std::vector<double>& terms, uint64_t denominator) {
    std::sort(terms.begin(), terms.end());
    return pairwise_sum(terms) / double(denominator);
}

// Mean of d over all nA*nB ordered pairs: the cross term, and the
// inclusive self term when called with a == b.
double mean_all_pairs(const SampleSet& a, const SampleSet& b, PairDistance distance,
                      const std::optional<PairSubsample>& sub, uint64_t term_tag) {
    const uint64_t na = a.size(), nb = b.size();
    const uint64_t total = na * nb;
    std::vector<double> terms;
    if (sub.has_value() && total > sub->max_pairs) {
        SplitMix64 rng = substream(sub->seed, term_tag, 0, 0);
        terms.reserve(sub->max_pairs);
        for (uint64_t k = 0; k < sub->max_pairs; ++k) {
            uint64_t i = rng.next_below(na);
            uint64_t j = rng.next_below(nb);
            terms.push_back(pair_distance(distance, a[i], b[j]));
        }
    } else {
        terms.reserve(total);
        for (uint64_t i = 0; i < na; ++i)
            for (uint64_t j = 0; j < nb; ++j)
                terms.push_back(pair_distance(distance, a[i], b[j]));
    }
    return sorted_mean(terms, terms.size());
}

// Mean of d over ordered pairs with distinct indices, divided by n(n-1).
double mean_offdiag_pairs(const SampleSet& s, PairDistance distance,
                          const std::optional<PairSubsample>& sub, uint64_t term_tag) {
    const uint64_t n = s.size();
    const uint64_t total = n * (n - 1);
    std::vector<double> terms;
    if (sub.has_value() && total > sub->max_pairs) {
        SplitMix64 rng = substream(sub->seed, term_tag, 0, 0);
        terms.reserve(sub->max_pairs);
        for (uint64_t k = 0; k < sub->max_pairs; ++k) {
            uint64_t i = rng.next_below(n);
            uint64_t j = rng.next_below(n - 1);
            if (j >= i) ++j;
            terms.push_back(pair_distance(distance, s[i], s[j]));
        }
    } else {
        terms.reserve(total);
        for (uint64_t i = 0; i < n; ++i)
            for (uint64_t j = 0; j < n; ++j)
                if (i != j) terms.push_back(pair_distance(distance, s[i], s[j]));
    }
    return sorted_mean(terms, terms.size());
}

}  // namespace

double ged(const SampleSet& annotations, const SampleSet& predictions, PairDistance distance,
           const GedOptions& options, CrossTermSummary* summary) {
    if (!(annotations.shape() == predictions.shape()))
        throw std::invalid_argument("ged: sample sets have different grid shapes");
    if (options.kind == EstimatorKind::unbiased &&
        (annotations.size() < 2 || predictions.size() < 2))
        throw std::invalid_argument("ged: unbiased estimator needs at least 2 masks per set");

    CrossTermSummary terms;
    terms.mean_cross =
        mean_all_pairs(annotations, predictions, distance, options.subsample, 0);
    if (options.kind == EstimatorKind::inclusive) {
        terms.mean_self_a =
            mean_all_pairs(annotations, annotations, distance, options.subsample, 1);
        terms.mean_self_y =
            mean_all_pairs(predictions, predictions, distance, options.subsample, 2);
    } else {
        terms.mean_self_a = mean_offdiag_pairs(annotations, distance, options.subsample, 1);
        terms.mean_self_y = mean_offdiag_pairs(predictions, distance, options.subsample, 2);
    }
    if (summary != nullptr) *summary = terms;
    // self terms grouped so swapping the two sets cannot change rounding
    return 2.0 * terms.mean_cross - (terms.mean_self_a + terms.mean_self_y);
}

double ged(const SampleSet& annotations, const SampleSet& predictions, PairDistance distance,
           EstimatorKind kind, CrossTermSummary* summary) {
    return ged(annotations, predictions, distance, GedOptions{kind, std::nullopt}, summary);
}

GedReport ged_triple(const SampleSet& annotations, const SampleSet& predictions,
                     EstimatorKind kind) {
    GedReport report;
    report.kind = kind;
    report.n_annotations = static_cast<uint32_t>(annotations.size());
    report.n_predictions = static_cast<uint32_t>(predictions.size());
    report.p_empty_ann = annotations.empty_fraction();
    report.p_empty_pred = predictions.empty_fraction();
    report.d2_ged = ged(annotations, predictions, PairDistance::iou_distance, kind);
    report.d2_det = ged(annotations, predictions, PairDistance::detection, kind);

    std::optional<SampleSet> fa = filter_nonempty(annotations);
    std::optional<SampleSet> fy = filter_nonempty(predictions);
    size_t min_size = kind == EstimatorKind::unbiased ? 2 : 1;
    if (fa.has_value() && fy.has_value() && fa->size() >= min_size && fy->size() >= min_size)
        report.d2_iou = ged(*fa, *fy, PairDistance::iou_distance, kind);
    return report;
}

double det_closed_form(double p_a, double p_y) {
    double diff = p_a - p_y;
    return 2.0 * diff * diff;
}

}  // namespace segunc
