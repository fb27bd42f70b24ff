#ifndef SEGUNC_GED_HPP
#define SEGUNC_GED_HPP

#include <cstdint>
#include <optional>
#include <string_view>

#include "segunc/mask.hpp"

namespace segunc {

// inclusive: means over all ordered pairs, diagonal included in self terms
//            (a V-statistic; guarantees ged(S,S) = 0 and non-negativity).
// unbiased:  self terms skip the diagonal and divide by n(n-1).
enum class EstimatorKind { inclusive, unbiased };

enum class PairDistance { iou_distance, detection };

const char* to_string(EstimatorKind kind);
std::optional<EstimatorKind> estimator_from_string(std::string_view name);

struct CrossTermSummary {
    double mean_cross = 0.0;   // E[d(A,Y)]
    double mean_self_a = 0.0;  // E[d(A,A')]
    double mean_self_y = 0.0;  // E[d(Y,Y')]
};

// Cap on the number of evaluated pairs per expectation term. When a term
// has more ordered pairs than max_pairs, that many pairs are drawn with
// replacement from a stream seeded by `seed` (deterministic).
struct PairSubsample {
    uint64_t max_pairs = 0;
    uint64_t seed = 0;
};

struct GedOptions {
    EstimatorKind kind = EstimatorKind::inclusive;
    std::optional<PairSubsample> subsample;
};

// Squared generalized energy distance between the two empirical
// distributions: 2 E[d(A,Y)] - E[d(A,A')] - E[d(Y,Y')], exact over the
// given finite sets unless subsampling is requested.
double ged(const SampleSet& annotations, const SampleSet& predictions, PairDistance distance,
           const GedOptions& options, CrossTermSummary* summary = nullptr);

double ged(const SampleSet& annotations, const SampleSet& predictions, PairDistance distance,
           EstimatorKind kind, CrossTermSummary* summary = nullptr);

struct GedReport {
    double d2_ged = 0.0;
    std::optional<double> d2_iou;  // nullopt when a filtered set has too few masks
    double d2_det = 0.0;
    uint32_t n_annotations = 0;
    uint32_t n_predictions = 0;
    double p_empty_ann = 0.0;
    double p_empty_pred = 0.0;
    EstimatorKind kind = EstimatorKind::inclusive;
};

// d2_ged and d2_det over the full sets, d2_iou over the non-empty subsets.
GedReport ged_triple(const SampleSet& annotations, const SampleSet& predictions,
                     EstimatorKind kind);

// Population value of the detection term for given emptiness rates.
double det_closed_form(double p_a, double p_y);

}  // namespace segunc

#endif
