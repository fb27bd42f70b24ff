#ifndef SEGUNC_STATS_HPP
#define SEGUNC_STATS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segunc/ged.hpp"

namespace segunc {

// Per-image metric values of two models, paired by image_id.
struct PairedSeries {
    std::vector<std::string> image_ids;
    std::vector<double> values_a;
    std::vector<double> values_b;
};

enum class Alternative { a_less, a_greater };

enum class PValueMode { exact, normal_approx };

struct WilcoxonResult {
    double w_statistic = 0.0;  // W+ = rank sum of positive differences
    double p_value = 1.0;
    double log10_p = 0.0;
    uint32_t n_effective = 0;  // pairs left after dropping zero differences
    uint32_t n_zeros = 0;
    PValueMode mode = PValueMode::exact;
};

// One-sided Wilcoxon signed-rank test on d_i = values_a - values_b. Zero
// differences are discarded; |d| ranks use midranks for ties. Exact p by
// DP over the null rank-sum distribution when n_effective <= 25 and the
// |d| are tie-free, otherwise normal approximation with tie-corrected
// variance and 0.5 continuity correction. The approximation path computes
// log10_p directly so extreme tails do not underflow. force_mode overrides
// the automatic choice; forcing exact where it does not apply is an error.
WilcoxonResult wilcoxon_one_sided(const PairedSeries& s, Alternative alternative,
                                  std::optional<PValueMode> force_mode = std::nullopt);

enum class MetricKind { d2_ged, d2_iou, d2_det };

const char* to_string(MetricKind metric);

struct RankedModel {
    std::string model;
    double mean = 0.0;
    uint64_t count = 0;  // images contributing to the mean
};

struct RankingResult {
    std::vector<RankedModel> ranking;  // ascending mean (lower is better)
    uint64_t dropped_images = 0;       // images lost to undefined cells
};

// Per-model series of (image_id, report). Models must cover a common image
// set; images where any model's chosen metric is undefined are dropped for
// every model, with the drop count reported.
using ModelReports = std::map<std::string, std::vector<std::pair<std::string, GedReport>>>;

RankingResult rank_models(const ModelReports& per_image, MetricKind metric);

}  // namespace segunc

#endif
