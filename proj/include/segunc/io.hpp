#ifndef SEGUNC_IO_HPP
#define SEGUNC_IO_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segunc/entropy.hpp"
#include "segunc/ged.hpp"
#include "segunc/mask.hpp"

namespace segunc {

enum class IoErrorKind {
    open_failed,
    bad_magic,
    bad_header,
    bad_maxval,
    truncated,
    bad_cell,
    bad_layout,
};

class IoError : public std::runtime_error {
public:
    IoError(IoErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    IoErrorKind kind() const { return kind_; }

private:
    IoErrorKind kind_;
};

// Masks are binary PGM (P5, maxval 255): pixel >= threshold is foreground.
BinaryMask read_mask(const std::filesystem::path& path, uint8_t threshold = 128);
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);

// Probability maps are 16-bit PGM (P5, maxval 65535, big-endian payload);
// value/65535 on read, nearest-integer quantization on write.
ProbMap read_probmap(const std::filesystem::path& path);
void write_probmap(const ProbMap& map, const std::filesystem::path& path);

struct ReportRow {
    std::string image_id;
    std::string model;
    double d2_ged = 0.0;
    std::optional<double> d2_iou;
    double d2_det = 0.0;
    uint32_t n_ann = 0;
    uint32_t n_pred = 0;
    double p_empty_ann = 0.0;
    double p_empty_pred = 0.0;
    EstimatorKind estimator = EstimatorKind::inclusive;
};

ReportRow make_report_row(std::string image_id, std::string model, const GedReport& report);

// CSV with the fixed header
// image_id,model,d2_ged,d2_iou,d2_det,n_ann,n_pred,p_empty_ann,p_empty_pred,estimator
// Doubles carry 17 significant digits, so the round-trip is lossless; an
// undefined d2_iou is an empty cell.
void write_report(std::span<const ReportRow> rows, const std::filesystem::path& path);
std::vector<ReportRow> read_report(const std::filesystem::path& path);

// Dataset layout: <root>/<image_id>/annotations/*.pgm plus
// <root>/<image_id>/predictions/<model>/*.pgm and optionally
// <root>/<image_id>/probmaps/<model>/*.pgm. File order inside a directory
// is lexicographic by filename.
std::vector<std::string> discover_images(const std::filesystem::path& root);
std::vector<std::string> discover_models(const std::filesystem::path& root);
std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir);
SampleSet load_mask_dir(const std::filesystem::path& dir, uint8_t threshold = 128);
std::vector<ProbMap> load_probmap_dir(const std::filesystem::path& dir);

// Writes to a sibling temp file and renames, so readers never observe a
// partial file.
void atomic_write(const std::filesystem::path& path, std::string_view payload);

std::string format_double(double value);  // %.17g

}  // namespace segunc

#endif
