#include "segunc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace segunc {

namespace {

// Geometry of the sloppy predictor archetype: shrunken boundary with
// coarse jitter, so non-empty pairs against annotations land near IoU 0.5.
constexpr AnnotatorProfile kSloppyProfile{
    .scale_bias = 0.70, .offset_x = 0.0, .offset_y = 0.0,
    .empty_rate = 0.0, .noise_sigma = 0.15, .noise_harmonics = 4};

double profile_reach(const AnnotatorProfile& p) {
    double jitter = p.noise_sigma > 0.0 ? p.noise_sigma * eta_bound(p.noise_harmonics) : 0.0;
    return p.scale_bias * (1.0 + jitter);
}

void fail(const std::string& field, const std::string& what) {
    throw std::invalid_argument("scenario." + field + ": " + what);
}

}  // namespace

void SynthScenario::validate() const {
    if (grid.height == 0 || grid.width == 0) fail("grid", "height and width must be >= 1");
    if (annotators.empty()) fail("annotators", "at least one annotator profile required");
    const ShapeParams& ts = true_shapes;
    if (!(ts.radius_min > 0.0)) fail("true_shapes.radius_min", "must be > 0");
    if (ts.radius_max < ts.radius_min) fail("true_shapes.radius_max", "must be >= radius_min");
    if (!(ts.aspect_min > 0.0)) fail("true_shapes.aspect_min", "must be > 0");
    if (ts.aspect_max < ts.aspect_min) fail("true_shapes.aspect_max", "must be >= aspect_min");
    if (ts.presence_prob < 0.0 || ts.presence_prob > 1.0)
        fail("true_shapes.presence_prob", "must be in [0, 1]");
    for (size_t i = 0; i < annotators.size(); ++i) {
        const AnnotatorProfile& a = annotators[i];
        std::string base = "annotators[" + std::to_string(i) + "].";
        if (!(a.scale_bias > 0.0)) fail(base + "scale_bias", "must be > 0");
        if (a.empty_rate < 0.0 || a.empty_rate > 1.0)
            fail(base + "empty_rate", "must be in [0, 1]");
        if (a.noise_sigma < 0.0) fail(base + "noise_sigma", "must be >= 0");
        if (a.noise_sigma > 0.0 && a.noise_harmonics == 0)
            fail(base + "noise_harmonics", "must be >= 1 when noise_sigma > 0");
    }

    // the largest deformed shape must fit between the center margins
    double reach = 1.0;
    for (const AnnotatorProfile& a : annotators) reach = std::max(reach, profile_reach(a));
    reach = std::max(reach, profile_reach(kSloppyProfile));
    double r_eff = ts.radius_max * std::max(1.0, ts.aspect_max);
    double offset = 0.0;
    for (const AnnotatorProfile& a : annotators)
        offset = std::max(offset, std::hypot(a.offset_x, a.offset_y));
    double margin = r_eff * reach + offset + 1.0;
    if (2.0 * margin >= std::min(grid.height, grid.width))
        fail("grid", "too small for true_shapes radius range and annotator reach");
}

double eta_bound(uint32_t harmonics) { return std::sqrt(2.0 * double(harmonics)); }

double max_jitter_px(const AnnotatorProfile& profile, const TrueShape& shape) {
    if (shape.kind == ShapeKind::absent || profile.noise_sigma == 0.0) return 0.0;
    double r = std::max(shape.rx, shape.ry) * profile.scale_bias;
    return r * profile.noise_sigma * eta_bound(profile.noise_harmonics);
}

BoundaryNoise BoundaryNoise::draw(uint32_t harmonics, SplitMix64& rng) {
    BoundaryNoise noise;
    noise.amplitudes.resize(harmonics);
    noise.phases.resize(harmonics);
    double norm2 = 0.0;
    for (uint32_t k = 0; k < harmonics; ++k) {
        noise.amplitudes[k] = rng.next_unit();
        norm2 += noise.amplitudes[k] * noise.amplitudes[k];
    }
    // scale to unit RMS over theta: sum a_k^2 / 2 = 1
    double scale = norm2 > 0.0 ? std::sqrt(2.0 / norm2) : 0.0;
    for (double& a : noise.amplitudes) a = norm2 > 0.0 ? a * scale : std::sqrt(2.0 / harmonics);
    for (uint32_t k = 0; k < harmonics; ++k)
        noise.phases[k] = 2.0 * std::numbers::pi * rng.next_unit();
    return noise;
}

double BoundaryNoise::eval(double theta) const {
    double v = 0.0;
    for (size_t k = 0; k < amplitudes.size(); ++k)
        v += amplitudes[k] * std::cos(double(k + 1) * theta + phases[k]);
    return v;
}

namespace {

// Inside test in normalized ellipse coordinates: rho(theta) <= 1 + sigma eta(theta).
BinaryMask rasterize_boundary(GridShape grid, double cx, double cy, double rx, double ry,
                              double sigma, const BoundaryNoise* noise) {
    BinaryMask mask(grid);
    if (rx <= 0.0 || ry <= 0.0) return mask;
    double bound = 1.0;
    if (noise != nullptr) bound += sigma * eta_bound(uint32_t(noise->amplitudes.size()));

    auto clamp_lo = [](double v) { return v < 0.0 ? 0L : long(v); };
    long col_lo = clamp_lo(std::floor(cx - rx * bound - 0.5));
    long col_hi = std::min<long>(grid.width - 1, long(std::ceil(cx + rx * bound - 0.5)));
    long row_lo = clamp_lo(std::floor(cy - ry * bound - 0.5));
    long row_hi = std::min<long>(grid.height - 1, long(std::ceil(cy + ry * bound - 0.5)));

    for (long row = row_lo; row <= row_hi; ++row) {
        double v = (double(row) + 0.5 - cy) / ry;
        for (long col = col_lo; col <= col_hi; ++col) {
            double u = (double(col) + 0.5 - cx) / rx;
            double rho = std::hypot(u, v);
            double limit = 1.0;
            if (noise != nullptr && rho > 0.0)
                limit += sigma * noise->eval(std::atan2(v, u));
            if (rho <= limit)
                mask.set(uint32_t(row), uint32_t(col), true);
        }
    }
    return mask;
}

}  // namespace

BinaryMask rasterize(const TrueShape& shape, GridShape grid) {
    if (shape.kind == ShapeKind::absent || !shape.presence) return BinaryMask(grid);
    return rasterize_boundary(grid, shape.cx, shape.cy, shape.rx, shape.ry, 0.0, nullptr);
}

BinaryMask annotate(const TrueShape& shape, const AnnotatorProfile& profile, GridShape grid,
                    SplitMix64& rng) {
    double u_empty = rng.next_unit();
    if (shape.kind == ShapeKind::absent || !shape.presence) return BinaryMask(grid);
    if (u_empty < profile.empty_rate) return BinaryMask(grid);

    double cx = shape.cx + profile.offset_x;
    double cy = shape.cy + profile.offset_y;
    double rx = shape.rx * profile.scale_bias;
    double ry = shape.ry * profile.scale_bias;
    if (profile.noise_sigma > 0.0) {
        BoundaryNoise noise = BoundaryNoise::draw(profile.noise_harmonics, rng);
        return rasterize_boundary(grid, cx, cy, rx, ry, profile.noise_sigma, &noise);
    }
    return rasterize_boundary(grid, cx, cy, rx, ry, 0.0, nullptr);
}

std::string synth_image_id(uint32_t image_index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "img_%06u", image_index);
    return buf;
}

SynthImage generate_image(const SynthScenario& scenario, uint32_t image_index) {
    const ShapeParams& ts = scenario.true_shapes;
    SplitMix64 rng = substream(scenario.seed, image_index, 0, 0);
    double u_presence = rng.next_unit();
    double rx = ts.radius_min + (ts.radius_max - ts.radius_min) * rng.next_unit();
    double aspect = ts.aspect_min + (ts.aspect_max - ts.aspect_min) * rng.next_unit();

    double reach = 1.0;
    for (const AnnotatorProfile& a : scenario.annotators)
        reach = std::max(reach, profile_reach(a));
    reach = std::max(reach, profile_reach(kSloppyProfile));
    double r_eff = ts.radius_max * std::max(1.0, ts.aspect_max);
    double margin = r_eff * reach + 1.0;
    double cx = margin + (scenario.grid.width - 2.0 * margin) * rng.next_unit();
    double cy = margin + (scenario.grid.height - 2.0 * margin) * rng.next_unit();

    SynthImage image;
    image.image_id = synth_image_id(image_index);
    if (u_presence < ts.presence_prob) {
        image.truth.kind = aspect == 1.0 ? ShapeKind::disk : ShapeKind::ellipse;
        image.truth.cx = cx;
        image.truth.cy = cy;
        image.truth.rx = rx;
        image.truth.ry = rx * aspect;
        image.truth.presence = true;
    } else {
        image.truth = TrueShape{};  // absent
    }

    image.annotations.reserve(scenario.annotators.size());
    for (uint32_t a = 0; a < scenario.annotators.size(); ++a) {
        SplitMix64 stream = substream(scenario.seed, image_index, 1, a);
        image.annotations.push_back(
            annotate(image.truth, scenario.annotators[a], scenario.grid, stream));
    }
    return image;
}

std::vector<SynthImage> generate(const SynthScenario& scenario) {
    scenario.validate();
    std::vector<SynthImage> images;
    images.reserve(scenario.n_images);
    for (uint32_t i = 0; i < scenario.n_images; ++i)
        images.push_back(generate_image(scenario, i));
    return images;
}

const char* to_string(PredictorStyle style) {
    switch (style) {
        case PredictorStyle::match_emptiness_sloppy: return "match_emptiness_sloppy";
        case PredictorStyle::always_segment_perfect: return "always_segment_perfect";
        default: return "oracle";
    }
}

std::optional<PredictorStyle> predictor_from_string(std::string_view name) {
    if (name == "match_emptiness_sloppy") return PredictorStyle::match_emptiness_sloppy;
    if (name == "always_segment_perfect") return PredictorStyle::always_segment_perfect;
    if (name == "oracle") return PredictorStyle::oracle;
    return std::nullopt;
}

SampleSet synthetic_predictor(const SynthScenario& scenario, const SynthImage& image,
                              PredictorStyle style, uint32_t n_samples) {
    if (n_samples == 0)
        throw std::invalid_argument("synthetic_predictor: n_samples must be >= 1");
    uint32_t image_index = 0;
    if (std::sscanf(image.image_id.c_str(), "img_%u", &image_index) != 1)
        throw std::invalid_argument("synthetic_predictor: unrecognized image_id " +
                                    image.image_id);

    std::vector<BinaryMask> samples;
    samples.reserve(n_samples);
    switch (style) {
        case PredictorStyle::always_segment_perfect: {
            BinaryMask truth = rasterize(image.truth, scenario.grid);
            for (uint32_t j = 0; j < n_samples; ++j) samples.push_back(truth);
            break;
        }
        case PredictorStyle::oracle: {
            for (uint32_t j = 0; j < n_samples; ++j) {
                SplitMix64 stream = substream(scenario.seed, image_index, 2, j);
                const AnnotatorProfile& profile =
                    scenario.annotators[j % scenario.annotators.size()];
                samples.push_back(annotate(image.truth, profile, scenario.grid, stream));
            }
            break;
        }
        case PredictorStyle::match_emptiness_sloppy: {
            size_t empty_ann = 0;
            for (const BinaryMask& m : image.annotations)
                if (is_empty(m)) ++empty_ann;
            auto n_empty = uint32_t(std::llround(double(n_samples) * double(empty_ann) /
                                                 double(image.annotations.size())));
            for (uint32_t j = 0; j < n_samples; ++j) {
                if (j < n_empty) {
                    samples.emplace_back(scenario.grid);
                    continue;
                }
                SplitMix64 stream = substream(scenario.seed, image_index, 3, j);
                samples.push_back(annotate(image.truth, kSloppyProfile, scenario.grid, stream));
            }
            break;
        }
    }
    return SampleSet(std::move(samples));
}

SynthScenario preset_prostate_like() {
    SynthScenario s;
    s.grid = {512, 512};
    s.n_images = 45;
    s.seed = 1;
    s.true_shapes = {.radius_min = 80.0, .radius_max = 130.0, .aspect_min = 1.0,
                     .aspect_max = 1.0, .presence_prob = 1.0};
    AnnotatorProfile expert{.scale_bias = 1.0, .offset_x = 0.0, .offset_y = 0.0,
                            .empty_rate = 0.0, .noise_sigma = 0.03, .noise_harmonics = 6};
    s.annotators.assign(6, expert);
    s.preset = "prostate_like";
    return s;
}

SynthScenario preset_lidc_like() {
    SynthScenario s;
    s.grid = {128, 128};
    s.n_images = 200;
    s.seed = 7;
    s.true_shapes = {.radius_min = 8.0, .radius_max = 20.0, .aspect_min = 1.0,
                     .aspect_max = 1.0, .presence_prob = 1.0};
    AnnotatorProfile reader{.scale_bias = 1.0, .offset_x = 0.0, .offset_y = 0.0,
                            .empty_rate = 0.5, .noise_sigma = 0.10, .noise_harmonics = 6};
    s.annotators.assign(4, reader);
    s.preset = "lidc_like";
    return s;
}

std::optional<SynthScenario> scenario_preset(std::string_view name) {
    if (name == "prostate_like") return preset_prostate_like();
    if (name == "lidc_like") return preset_lidc_like();
    return std::nullopt;
}

}  // namespace segunc
