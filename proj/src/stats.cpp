#include "segunc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "segunc/pairwise_sum.hpp"

namespace segunc {

namespace {

// ln of the standard normal survival function. Direct erfc is accurate up
// to z ~ 35; beyond that erfc underflows and the asymptotic expansion
// ln SF(z) = -z^2/2 - ln(z sqrt(2 pi)) + ln(1 - 1/z^2 + 3/z^4 - ...)
// takes over.
double log_normal_sf(double z) {
    if (z <= 35.0) {
        double p = 0.5 * std::erfc(z / std::numbers::sqrt2);
        return std::log(p);
    }
    double inv2 = 1.0 / (z * z);
    double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
    return -0.5 * z * z - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log(series);
}

// Number of subsets of {1..n} with element sum s, for all s. Fits in
// uint64 up to n = 25 (total 2^25 subsets).
std::vector<uint64_t> rank_sum_counts(uint32_t n) {
    uint32_t max_sum = n * (n + 1) / 2;
    std::vector<uint64_t> counts(max_sum + 1, 0);
    counts[0] = 1;
    for (uint32_t r = 1; r <= n; ++r)
        for (uint32_t s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    return counts;
}

}  // namespace

WilcoxonResult wilcoxon_one_sided(const PairedSeries& s, Alternative alternative,
                                  std::optional<PValueMode> force_mode) {
    if (s.values_a.size() != s.values_b.size())
        throw std::invalid_argument("wilcoxon: series length mismatch");
    if (!s.image_ids.empty() && s.image_ids.size() != s.values_a.size())
        throw std::invalid_argument("wilcoxon: image_ids length mismatch");
    if (s.values_a.empty()) throw std::invalid_argument("wilcoxon: empty series");

    std::vector<double> diffs;
    diffs.reserve(s.values_a.size());
    uint32_t n_zeros = 0;
    for (size_t i = 0; i < s.values_a.size(); ++i) {
        double d = s.values_a[i] - s.values_b[i];
        if (d == 0.0)
            ++n_zeros;
        else
            diffs.push_back(d);
    }
    if (diffs.empty())
        throw std::invalid_argument("wilcoxon: all differences are zero");

    const auto n = static_cast<uint32_t>(diffs.size());
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return std::fabs(diffs[a]) < std::fabs(diffs[b]);
    });

    // midranks; track tie group sizes for the variance correction
    std::vector<double> ranks(n);
    bool has_ties = false;
    double tie_correction = 0.0;
    for (uint32_t i = 0; i < n;) {
        uint32_t j = i;
        while (j < n && std::fabs(diffs[order[j]]) == std::fabs(diffs[order[i]])) ++j;
        double t = j - i;
        double midrank = (double(i + 1) + double(j)) / 2.0;
        for (uint32_t k = i; k < j; ++k) ranks[order[k]] = midrank;
        if (j - i > 1) {
            has_ties = true;
            tie_correction += (t * t * t - t) / 48.0;
        }
        i = j;
    }

    double w_plus = 0.0;
    for (uint32_t i = 0; i < n; ++i)
        if (diffs[i] > 0.0) w_plus += ranks[i];

    WilcoxonResult result;
    result.w_statistic = w_plus;
    result.n_effective = n;
    result.n_zeros = n_zeros;

    constexpr uint32_t kExactLimit = 25;
    bool exact_ok = n <= kExactLimit && !has_ties;
    if (force_mode == PValueMode::exact && !exact_ok)
        throw std::invalid_argument(
            "wilcoxon: exact mode needs tie-free |d| and n <= " + std::to_string(kExactLimit));
    if (force_mode.has_value() ? *force_mode == PValueMode::exact : exact_ok) {
        result.mode = PValueMode::exact;
        std::vector<uint64_t> counts = rank_sum_counts(n);
        auto w = static_cast<uint32_t>(std::llround(w_plus));
        uint64_t favorable = 0;
        if (alternative == Alternative::a_greater) {
            for (uint32_t v = w; v < counts.size(); ++v) favorable += counts[v];
        } else {
            for (uint32_t v = 0; v <= w; ++v) favorable += counts[v];
        }
        result.p_value = double(favorable) / std::ldexp(1.0, int(n));
        result.log10_p = std::log10(result.p_value);
        return result;
    }

    result.mode = PValueMode::normal_approx;
    double nd = n;
    double mu = nd * (nd + 1.0) / 4.0;
    double sigma2 = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_correction;
    if (sigma2 <= 0.0)
        throw std::runtime_error("wilcoxon: degenerate rank variance");
    double sigma = std::sqrt(sigma2);
    double z = alternative == Alternative::a_greater ? (w_plus - 0.5 - mu) / sigma
                                                     : (mu - w_plus - 0.5) / sigma;
    double ln_p = log_normal_sf(z);
    result.log10_p = ln_p / std::numbers::ln10;
    result.p_value = std::exp(ln_p);
    if (result.p_value <= 0.0)
        result.p_value = std::numeric_limits<double>::denorm_min();
    if (result.p_value > 1.0) result.p_value = 1.0;
    return result;
}

const char* to_string(MetricKind metric) {
    switch (metric) {
        case MetricKind::d2_ged: return "d2_ged";
        case MetricKind::d2_iou: return "d2_iou";
        default: return "d2_det";
    }
}

namespace {

std::optional<double> metric_value(const GedReport& report, MetricKind metric) {
    switch (metric) {
        case MetricKind::d2_ged: return report.d2_ged;
        case MetricKind::d2_iou: return report.d2_iou;
        default: return report.d2_det;
    }
}

}  // namespace

RankingResult rank_models(const ModelReports& per_image, MetricKind metric) {
    if (per_image.empty()) throw std::invalid_argument("rank_models: no models given");

    // all models must cover an identical image set
    std::set<std::string> image_set;
    for (const auto& [image_id, report] : per_image.begin()->second)
        image_set.insert(image_id);
    for (const auto& [model, rows] : per_image) {
        std::set<std::string> ids;
        for (const auto& [image_id, report] : rows) ids.insert(image_id);
        if (ids != image_set)
            throw std::invalid_argument("rank_models: model '" + model +
                                        "' covers a different image set");
        if (ids.size() != rows.size())
            throw std::invalid_argument("rank_models: model '" + model +
                                        "' has duplicate image ids");
    }

    // images where every model has a defined value
    std::set<std::string> valid = image_set;
    for (const auto& [model, rows] : per_image)
        for (const auto& [image_id, report] : rows)
            if (!metric_value(report, metric).has_value()) valid.erase(image_id);
    if (valid.empty())
        throw std::invalid_argument("rank_models: no image has the metric defined for all models");

    RankingResult result;
    result.dropped_images = image_set.size() - valid.size();
    for (const auto& [model, rows] : per_image) {
        std::vector<double> values;
        std::vector<std::pair<std::string, double>> cells;
        for (const auto& [image_id, report] : rows)
            if (valid.count(image_id) != 0)
                cells.emplace_back(image_id, *metric_value(report, metric));
        std::sort(cells.begin(), cells.end());  // image order independence
        values.reserve(cells.size());
        for (const auto& [id, v] : cells) values.push_back(v);
        double mean = pairwise_sum(values) / double(values.size());
        result.ranking.push_back({model, mean, values.size()});
    }
    std::sort(result.ranking.begin(), result.ranking.end(),
              [](const RankedModel& a, const RankedModel& b) {
                  if (a.mean != b.mean) return a.mean < b.mean;
                  return a.model < b.model;
              });
    return result;
}

}  // namespace segunc
