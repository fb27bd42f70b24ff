#include "segunc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace segunc {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(IoErrorKind::open_failed, "cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(IoErrorKind::open_failed, "read error on " + path.string());
    return data;
}

struct PgmHeader {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t maxval = 0;
    size_t payload_offset = 0;
};

bool pgm_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// P5 header: magic, then width/height/maxval separated by whitespace with
// '#' comments, then exactly one whitespace byte before the payload.
PgmHeader parse_pgm_header(const std::string& data, const fs::path& path) {
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
        throw IoError(IoErrorKind::bad_magic, path.string() + ": not a binary PGM (P5)");
    size_t pos = 2;
    auto skip_separators = [&]() {
        bool advanced = false;
        while (pos < data.size()) {
            if (pgm_space(data[pos])) {
                ++pos;
                advanced = true;
            } else if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
                advanced = true;
            } else {
                break;
            }
        }
        return advanced;
    };
    auto read_number = [&]() -> uint64_t {
        if (!skip_separators() || pos >= data.size() || data[pos] < '0' || data[pos] > '9')
            throw IoError(IoErrorKind::bad_header, path.string() + ": malformed PGM header");
        uint64_t value = 0;
        while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9') {
            value = value * 10 + uint64_t(data[pos] - '0');
            if (value > 0xffffffffull)
                throw IoError(IoErrorKind::bad_header, path.string() + ": header value overflow");
            ++pos;
        }
        return value;
    };

    PgmHeader h;
    h.width = uint32_t(read_number());
    h.height = uint32_t(read_number());
    h.maxval = uint32_t(read_number());
    if (h.width == 0 || h.height == 0)
        throw IoError(IoErrorKind::bad_header, path.string() + ": zero image dimension");
    if (pos >= data.size() || !pgm_space(data[pos]))
        throw IoError(IoErrorKind::bad_header, path.string() + ": missing payload separator");
    h.payload_offset = pos + 1;
    return h;
}

}  // namespace

BinaryMask read_mask(const fs::path& path, uint8_t threshold) {
    std::string data = read_file(path);
    PgmHeader h = parse_pgm_header(data, path);
    if (h.maxval != 255)
        throw IoError(IoErrorKind::bad_maxval,
                      path.string() + ": mask PGM must have maxval 255, got " +
                          std::to_string(h.maxval));
    GridShape shape{h.height, h.width};
    if (data.size() - h.payload_offset < shape.pixels())
        throw IoError(IoErrorKind::truncated, path.string() + ": truncated mask payload");
    auto pixels = std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(data.data() + h.payload_offset), shape.pixels());
    return BinaryMask::from_bytes(shape, pixels, threshold);
}

void write_mask(const BinaryMask& mask, const fs::path& path) {
    const GridShape& shape = mask.shape();
    std::string payload;
    payload.reserve(shape.pixels() + 32);
    payload += "P5\n" + std::to_string(shape.width) + " " + std::to_string(shape.height) +
               "\n255\n";
    for (uint32_t r = 0; r < shape.height; ++r)
        for (uint32_t c = 0; c < shape.width; ++c)
            payload += mask.get(r, c) ? char(255) : char(0);
    atomic_write(path, payload);
}

ProbMap read_probmap(const fs::path& path) {
    std::string data = read_file(path);
    PgmHeader h = parse_pgm_header(data, path);
    if (h.maxval != 65535)
        throw IoError(IoErrorKind::bad_maxval,
                      path.string() + ": probability-map PGM must have maxval 65535, got " +
                          std::to_string(h.maxval));
    GridShape shape{h.height, h.width};
    if (data.size() - h.payload_offset < 2 * shape.pixels())
        throw IoError(IoErrorKind::truncated, path.string() + ": truncated probmap payload");
    const auto* bytes = reinterpret_cast<const uint8_t*>(data.data() + h.payload_offset);
    std::vector<double> values(shape.pixels());
    for (uint64_t p = 0; p < shape.pixels(); ++p) {
        uint32_t v = (uint32_t(bytes[2 * p]) << 8) | uint32_t(bytes[2 * p + 1]);
        values[p] = double(v) / 65535.0;
    }
    return ProbMap(shape, std::move(values));
}

void write_probmap(const ProbMap& map, const fs::path& path) {
    const GridShape& shape = map.shape();
    std::string payload;
    payload.reserve(2 * shape.pixels() + 32);
    payload += "P5\n" + std::to_string(shape.width) + " " + std::to_string(shape.height) +
               "\n65535\n";
    for (double v : map.values()) {
        auto q = long(std::llround(v * 65535.0));
        q = std::clamp(q, 0L, 65535L);
        payload += char(uint8_t(q >> 8));
        payload += char(uint8_t(q & 0xff));
    }
    atomic_write(path, payload);
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

ReportRow make_report_row(std::string image_id, std::string model, const GedReport& report) {
    ReportRow row;
    row.image_id = std::move(image_id);
    row.model = std::move(model);
    row.d2_ged = report.d2_ged;
    row.d2_iou = report.d2_iou;
    row.d2_det = report.d2_det;
    row.n_ann = report.n_annotations;
    row.n_pred = report.n_predictions;
    row.p_empty_ann = report.p_empty_ann;
    row.p_empty_pred = report.p_empty_pred;
    row.estimator = report.kind;
    return row;
}

namespace {

constexpr const char* kReportHeader =
    "image_id,model,d2_ged,d2_iou,d2_det,n_ann,n_pred,p_empty_ann,p_empty_pred,estimator";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double_cell(const std::string& cell, const fs::path& path) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw IoError(IoErrorKind::bad_cell,
                      path.string() + ": non-numeric cell '" + cell + "'");
    return v;
}

uint32_t parse_count_cell(const std::string& cell, const fs::path& path) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    unsigned long v = std::strtoul(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw IoError(IoErrorKind::bad_cell,
                      path.string() + ": non-integer cell '" + cell + "'");
    return uint32_t(v);
}

}  // namespace

void write_report(std::span<const ReportRow> rows, const fs::path& path) {
    std::string out;
    out += kReportHeader;
    out += '\n';
    for (const ReportRow& row : rows) {
        out += row.image_id;
        out += ',';
        out += row.model;
        out += ',';
        out += format_double(row.d2_ged);
        out += ',';
        if (row.d2_iou.has_value()) out += format_double(*row.d2_iou);
        out += ',';
        out += format_double(row.d2_det);
        out += ',';
        out += std::to_string(row.n_ann);
        out += ',';
        out += std::to_string(row.n_pred);
        out += ',';
        out += format_double(row.p_empty_ann);
        out += ',';
        out += format_double(row.p_empty_pred);
        out += ',';
        out += to_string(row.estimator);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<ReportRow> read_report(const fs::path& path) {
    std::string data = read_file(path);
    std::vector<ReportRow> rows;
    size_t pos = 0;
    bool saw_header = false;
    while (pos < data.size()) {
        size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string line = data.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!saw_header) {
            if (line != kReportHeader)
                throw IoError(IoErrorKind::bad_header,
                              path.string() + ": unknown report header '" + line + "'");
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 10)
            throw IoError(IoErrorKind::bad_cell,
                          path.string() + ": expected 10 cells, got " +
                              std::to_string(f.size()));
        ReportRow row;
        row.image_id = f[0];
        row.model = f[1];
        row.d2_ged = parse_double_cell(f[2], path);
        if (!f[3].empty()) row.d2_iou = parse_double_cell(f[3], path);
        row.d2_det = parse_double_cell(f[4], path);
        row.n_ann = parse_count_cell(f[5], path);
        row.n_pred = parse_count_cell(f[6], path);
        row.p_empty_ann = parse_double_cell(f[7], path);
        row.p_empty_pred = parse_double_cell(f[8], path);
        std::optional<EstimatorKind> kind = estimator_from_string(f[9]);
        if (!kind.has_value())
            throw IoError(IoErrorKind::bad_cell,
                          path.string() + ": unknown estimator '" + f[9] + "'");
        row.estimator = *kind;
        rows.push_back(std::move(row));
    }
    if (!saw_header)
        throw IoError(IoErrorKind::bad_header, path.string() + ": empty report file");
    return rows;
}

std::vector<std::string> discover_images(const fs::path& root) {
    if (!fs::is_directory(root))
        throw IoError(IoErrorKind::bad_layout, "dataset root not found: " + root.string());
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) ids.push_back(entry.path().filename().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::string> discover_models(const fs::path& root) {
    std::set<std::string> models;
    for (const std::string& image_id : discover_images(root)) {
        fs::path pred = root / image_id / "predictions";
        if (!fs::is_directory(pred)) continue;
        for (const auto& entry : fs::directory_iterator(pred))
            if (entry.is_directory()) models.insert(entry.path().filename().string());
    }
    return {models.begin(), models.end()};
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw IoError(IoErrorKind::bad_layout, "directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    return files;
}

SampleSet load_mask_dir(const fs::path& dir, uint8_t threshold) {
    std::vector<BinaryMask> masks;
    for (const fs::path& file : sorted_files(dir)) masks.push_back(read_mask(file, threshold));
    if (masks.empty())
        throw IoError(IoErrorKind::bad_layout, "no mask files in " + dir.string());
    return SampleSet(std::move(masks));
}

std::vector<ProbMap> load_probmap_dir(const fs::path& dir) {
    std::vector<ProbMap> maps;
    for (const fs::path& file : sorted_files(dir)) maps.push_back(read_probmap(file));
    if (maps.empty())
        throw IoError(IoErrorKind::bad_layout, "no probmap files in " + dir.string());
    return maps;
}

void atomic_write(const fs::path& path, std::string_view payload) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(IoErrorKind::open_failed, "cannot create " + tmp.string());
        out.write(payload.data(), std::streamsize(payload.size()));
        if (!out) throw IoError(IoErrorKind::open_failed, "write failed on " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace segunc
