#ifndef SEGUNC_SYNTH_HPP
#define SEGUNC_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segunc/mask.hpp"
#include "segunc/rng.hpp"

namespace segunc {

enum class ShapeKind { disk, ellipse, absent };

// Ground-truth object: an axis-aligned ellipse (disk when rx == ry) in
// subpixel coordinates, or absent (rasterizes to the empty mask).
struct TrueShape {
    ShapeKind kind = ShapeKind::absent;
    double cx = 0.0, cy = 0.0;
    double rx = 0.0, ry = 0.0;
    bool presence = false;
};

// Systematic bias (scale/offset), ambiguity (empty_rate) and drawing error
// (radial boundary jitter) of one annotator, as orthogonal knobs.
struct AnnotatorProfile {
    double scale_bias = 1.0;
    double offset_x = 0.0, offset_y = 0.0;
    double empty_rate = 0.0;
    double noise_sigma = 0.0;        // relative boundary jitter, unit RMS scale
    uint32_t noise_harmonics = 1;
};

struct ShapeParams {
    double radius_min = 8.0;
    double radius_max = 16.0;
    double aspect_min = 1.0;   // ry = rx * aspect
    double aspect_max = 1.0;
    double presence_prob = 1.0;
};

struct SynthScenario {
    GridShape grid{128, 128};
    uint32_t n_images = 0;
    ShapeParams true_shapes;
    std::vector<AnnotatorProfile> annotators;
    uint64_t seed = 0;
    std::optional<std::string> preset;  // name this scenario was derived from

    void validate() const;  // throws std::invalid_argument with a field path
};

// Boundary perturbation eta(theta) = sum_k a_k cos(k theta + phi_k) with
// random phases and amplitudes normalized to unit RMS over theta, so
// noise_sigma is the RMS relative radial jitter. |eta| <= sqrt(2 H).
struct BoundaryNoise {
    std::vector<double> amplitudes;
    std::vector<double> phases;

    static BoundaryNoise draw(uint32_t harmonics, SplitMix64& rng);
    double eval(double theta) const;
};

// Upper bound on |eta| for a profile's harmonic count.
double eta_bound(uint32_t harmonics);

// Largest radial boundary displacement this profile can produce on this
// shape, in pixels.
double max_jitter_px(const AnnotatorProfile& profile, const TrueShape& shape);

// Pixel centers (col + 0.5, row + 0.5); a pixel is foreground iff its
// center lies inside the boundary.
BinaryMask rasterize(const TrueShape& shape, GridShape grid);

// One annotation per the bias + noise model. Stream draw order: the
// emptiness uniform, then amplitudes, then phases.
BinaryMask annotate(const TrueShape& shape, const AnnotatorProfile& profile, GridShape grid,
                    SplitMix64& rng);

struct SynthImage {
    std::string image_id;
    TrueShape truth;
    std::vector<BinaryMask> annotations;  // one per annotator, in profile order
};

// Substream lanes: 0 = truth draws, 1 = annotations (index = annotator),
// 2 = oracle predictor samples, 3 = sloppy predictor samples.
SynthImage generate_image(const SynthScenario& scenario, uint32_t image_index);

std::vector<SynthImage> generate(const SynthScenario& scenario);

enum class PredictorStyle { match_emptiness_sloppy, always_segment_perfect, oracle };

const char* to_string(PredictorStyle style);
std::optional<PredictorStyle> predictor_from_string(std::string_view name);

// Model archetypes for the detection-vs-delineation trade-off:
//  - always_segment_perfect: never empty, copies the bias-free rasterized
//    truth exactly.
//  - match_emptiness_sloppy: reproduces the image's realized annotation
//    emptiness count, with shrunken and jittered boundaries otherwise.
//  - oracle: fresh draws from the same annotator model (profiles cycled).
SampleSet synthetic_predictor(const SynthScenario& scenario, const SynthImage& image,
                              PredictorStyle style, uint32_t n_samples);

SynthScenario preset_prostate_like();
SynthScenario preset_lidc_like();
std::optional<SynthScenario> scenario_preset(std::string_view name);

std::string synth_image_id(uint32_t image_index);

}  // namespace segunc

#endif
