// segunc: batch front-end for synthetic dataset generation, three-metric
// evaluation, entropy maps, and paired significance tests.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "segunc/entropy.hpp"
#include "segunc/ged.hpp"
#include "segunc/io.hpp"
#include "segunc/mask.hpp"
#include "segunc/pairwise_sum.hpp"
#include "segunc/parallel.hpp"
#include "segunc/stats.hpp"
#include "segunc/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SEGUNC_LOG");
        if (env == nullptr) return LogLevel::warn;
        std::string v = env;
        if (v == "error") return LogLevel::error;
        if (v == "warn") return LogLevel::warn;
        if (v == "info") return LogLevel::info;
        if (v == "debug") return LogLevel::debug;
        std::fprintf(stderr, "segunc: warn: unknown SEGUNC_LOG level '%s'\n", env);
        return LogLevel::warn;
    }();
    return level;
}

void log_at(LogLevel level, const std::string& msg) {
    if (level > log_threshold()) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "segunc: %s: %s\n", names[int(level)], msg.c_str());
}

void log_info(const std::string& msg) { log_at(LogLevel::info, msg); }
void log_debug(const std::string& msg) { log_at(LogLevel::debug, msg); }

std::string index3(uint32_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03u", i);
    return buf;
}

// ---------------------------------------------------------------------------
// scenario JSON

struct SynthJob {
    segunc::SynthScenario scenario;
    std::vector<segunc::PredictorStyle> predictors;
    uint32_t n_predictions = 0;  // 0: one prediction per annotator
};

[[noreturn]] void fail_field(const std::string& path, const std::string& msg) {
    throw std::invalid_argument("scenario." + path + ": " + msg);
}

void check_keys(const ordered_json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (key == k) known = true;
        if (!known) fail_field(path.empty() ? key : path + "." + key, "unknown field");
    }
}

double require_number(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) fail_field(path, "expected a number");
    return v.get<double>();
}

uint64_t require_uint(const ordered_json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        fail_field(path, "expected a non-negative integer");
    return v.get<uint64_t>();
}

segunc::AnnotatorProfile annotator_from_json(const ordered_json& v, const std::string& path) {
    if (!v.is_object()) fail_field(path, "expected an object");
    check_keys(v, path, {"scale_bias", "offset_x", "offset_y", "empty_rate", "noise_sigma",
                         "noise_harmonics"});
    segunc::AnnotatorProfile p;
    if (v.contains("scale_bias")) p.scale_bias = require_number(v["scale_bias"], path + ".scale_bias");
    if (v.contains("offset_x")) p.offset_x = require_number(v["offset_x"], path + ".offset_x");
    if (v.contains("offset_y")) p.offset_y = require_number(v["offset_y"], path + ".offset_y");
    if (v.contains("empty_rate")) p.empty_rate = require_number(v["empty_rate"], path + ".empty_rate");
    if (v.contains("noise_sigma"))
        p.noise_sigma = require_number(v["noise_sigma"], path + ".noise_sigma");
    if (v.contains("noise_harmonics"))
        p.noise_harmonics = uint32_t(require_uint(v["noise_harmonics"], path + ".noise_harmonics"));
    return p;
}

SynthJob scenario_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("scenario: expected a JSON object");
    check_keys(doc, "", {"schema_version", "preset", "grid", "n_images", "seed", "true_shapes",
                         "annotators", "predictors", "n_predictions"});
    if (!doc.contains("schema_version") || require_uint(doc["schema_version"], "schema_version") != 1)
        fail_field("schema_version", "expected 1");

    SynthJob job;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) fail_field("preset", "expected a string");
        auto name = doc["preset"].get<std::string>();
        std::optional<segunc::SynthScenario> preset = segunc::scenario_preset(name);
        if (!preset.has_value()) fail_field("preset", "unknown preset '" + name + "'");
        job.scenario = *preset;
    }
    segunc::SynthScenario& s = job.scenario;

    if (doc.contains("grid")) {
        const ordered_json& g = doc["grid"];
        if (!g.is_object()) fail_field("grid", "expected an object");
        check_keys(g, "grid", {"height", "width"});
        if (!g.contains("height") || !g.contains("width"))
            fail_field("grid", "height and width both required");
        s.grid.height = uint32_t(require_uint(g["height"], "grid.height"));
        s.grid.width = uint32_t(require_uint(g["width"], "grid.width"));
    }
    if (doc.contains("n_images"))
        s.n_images = uint32_t(require_uint(doc["n_images"], "n_images"));
    if (doc.contains("seed")) s.seed = require_uint(doc["seed"], "seed");

    if (doc.contains("true_shapes")) {
        const ordered_json& t = doc["true_shapes"];
        if (!t.is_object()) fail_field("true_shapes", "expected an object");
        check_keys(t, "true_shapes",
                   {"radius_min", "radius_max", "aspect_min", "aspect_max", "presence_prob"});
        segunc::ShapeParams& ts = s.true_shapes;
        if (t.contains("radius_min"))
            ts.radius_min = require_number(t["radius_min"], "true_shapes.radius_min");
        if (t.contains("radius_max"))
            ts.radius_max = require_number(t["radius_max"], "true_shapes.radius_max");
        if (t.contains("aspect_min"))
            ts.aspect_min = require_number(t["aspect_min"], "true_shapes.aspect_min");
        if (t.contains("aspect_max"))
            ts.aspect_max = require_number(t["aspect_max"], "true_shapes.aspect_max");
        if (t.contains("presence_prob"))
            ts.presence_prob = require_number(t["presence_prob"], "true_shapes.presence_prob");
    }

    if (doc.contains("annotators")) {
        const ordered_json& arr = doc["annotators"];
        if (!arr.is_array()) fail_field("annotators", "expected an array");
        s.annotators.clear();
        for (size_t i = 0; i < arr.size(); ++i)
            s.annotators.push_back(
                annotator_from_json(arr[i], "annotators[" + std::to_string(i) + "]"));
    }

    if (doc.contains("predictors")) {
        const ordered_json& arr = doc["predictors"];
        if (!arr.is_array()) fail_field("predictors", "expected an array");
        for (size_t i = 0; i < arr.size(); ++i) {
            std::string path = "predictors[" + std::to_string(i) + "]";
            if (!arr[i].is_string()) fail_field(path, "expected a string");
            auto name = arr[i].get<std::string>();
            std::optional<segunc::PredictorStyle> style = segunc::predictor_from_string(name);
            if (!style.has_value()) fail_field(path, "unknown predictor style '" + name + "'");
            job.predictors.push_back(*style);
        }
    }
    if (doc.contains("n_predictions")) {
        job.n_predictions = uint32_t(require_uint(doc["n_predictions"], "n_predictions"));
        if (job.n_predictions == 0) fail_field("n_predictions", "must be >= 1");
    }
    return job;
}

ordered_json grid_to_json(const segunc::GridShape& g) {
    return {{"height", g.height}, {"width", g.width}};
}

ordered_json manifest_json(const SynthJob& job, uint32_t n_predictions) {
    const segunc::SynthScenario& s = job.scenario;
    ordered_json m;
    m["schema_version"] = 1;
    if (s.preset.has_value())
        m["preset"] = *s.preset;
    else
        m["preset"] = nullptr;
    m["seed"] = s.seed;
    m["n_images"] = s.n_images;
    m["grid"] = grid_to_json(s.grid);
    m["true_shapes"] = {{"radius_min", s.true_shapes.radius_min},
                        {"radius_max", s.true_shapes.radius_max},
                        {"aspect_min", s.true_shapes.aspect_min},
                        {"aspect_max", s.true_shapes.aspect_max},
                        {"presence_prob", s.true_shapes.presence_prob}};
    m["annotators"] = ordered_json::array();
    for (const segunc::AnnotatorProfile& a : s.annotators)
        m["annotators"].push_back({{"scale_bias", a.scale_bias},
                                   {"offset_x", a.offset_x},
                                   {"offset_y", a.offset_y},
                                   {"empty_rate", a.empty_rate},
                                   {"noise_sigma", a.noise_sigma},
                                   {"noise_harmonics", a.noise_harmonics}});
    m["predictors"] = ordered_json::array();
    for (segunc::PredictorStyle style : job.predictors)
        m["predictors"].push_back(segunc::to_string(style));
    m["n_predictions"] = n_predictions;
    return m;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::string scenario_path;
    std::string out_root;
    std::optional<uint64_t> seed;
    unsigned workers = 1;
};

int run_synth(const SynthArgs& args) {
    std::ifstream in(args.scenario_path);
    if (!in)
        throw segunc::IoError(segunc::IoErrorKind::open_failed,
                              "cannot open scenario " + args.scenario_path);
    ordered_json doc = ordered_json::parse(in);
    SynthJob job = scenario_from_json(doc);
    if (args.seed.has_value()) job.scenario.seed = *args.seed;
    job.scenario.validate();

    const segunc::SynthScenario& s = job.scenario;
    uint32_t n_pred = job.n_predictions > 0 ? job.n_predictions : uint32_t(s.annotators.size());
    fs::path root = args.out_root;
    fs::create_directories(root);
    log_info("synth: " + std::to_string(s.n_images) + " images, " +
             std::to_string(s.annotators.size()) + " annotators, " +
             std::to_string(job.predictors.size()) + " predictor styles");

    segunc::run_indexed(s.n_images, args.workers, [&](size_t i) {
        segunc::SynthImage image = segunc::generate_image(s, uint32_t(i));
        fs::path dir = root / image.image_id;
        fs::create_directories(dir / "annotations");
        fs::create_directories(dir / "truth");
        for (uint32_t a = 0; a < image.annotations.size(); ++a)
            segunc::write_mask(image.annotations[a],
                               dir / "annotations" / ("a_" + index3(a) + ".pgm"));
        segunc::write_mask(segunc::rasterize(image.truth, s.grid), dir / "truth" / "truth.pgm");
        for (segunc::PredictorStyle style : job.predictors) {
            segunc::SampleSet preds = segunc::synthetic_predictor(s, image, style, n_pred);
            fs::path model_dir = dir / "predictions" / segunc::to_string(style);
            fs::create_directories(model_dir);
            for (uint32_t j = 0; j < preds.size(); ++j)
                segunc::write_mask(preds[j], model_dir / ("p_" + index3(j) + ".pgm"));
        }
        log_debug("synth: wrote " + image.image_id);
    });

    segunc::atomic_write(root / "manifest.json", manifest_json(job, n_pred).dump(2) + "\n");
    log_info("synth: wrote " + (root / "manifest.json").string());
    return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string dataset;
    std::vector<std::string> models;
    std::string estimator = "inclusive";
    unsigned threshold = 128;
    unsigned workers = 1;
    std::string out;
    std::string summary;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ordered_json column_summary(const std::vector<double>& values) {
    ordered_json block;
    if (values.empty()) {
        block["mean"] = nullptr;
        block["median"] = nullptr;
    } else {
        block["mean"] =
            segunc::pairwise_sum(std::span<const double>(values)) / double(values.size());
        block["median"] = median_of(values);
    }
    return block;
}

int run_eval(const EvalArgs& args) {
    fs::path root = args.dataset;
    std::vector<std::string> images = segunc::discover_images(root);
    std::vector<std::string> available = segunc::discover_models(root);

    std::vector<std::string> models = args.models;
    if (models.empty()) {
        models = available;
    } else {
        std::set<std::string> known(available.begin(), available.end());
        for (const std::string& m : models)
            if (!known.contains(m))
                throw segunc::IoError(segunc::IoErrorKind::bad_layout,
                                      "unknown model '" + m + "' (discovered: " +
                                          [&] {
                                              std::string list;
                                              for (const std::string& k : available)
                                                  list += (list.empty() ? "" : ", ") + k;
                                              return list.empty() ? "none" : list;
                                          }() +
                                          ")");
        std::sort(models.begin(), models.end());
        models.erase(std::unique(models.begin(), models.end()), models.end());
    }
    if (models.empty())
        throw segunc::IoError(segunc::IoErrorKind::bad_layout,
                              "no prediction models found under " + root.string());

    std::optional<segunc::EstimatorKind> kind = segunc::estimator_from_string(args.estimator);
    if (!kind.has_value())
        throw std::invalid_argument("unknown estimator '" + args.estimator + "'");
    auto threshold = uint8_t(args.threshold);

    log_info("eval: " + std::to_string(images.size()) + " images, " +
             std::to_string(models.size()) + " models, estimator " + args.estimator);

    std::vector<segunc::ReportRow> rows(images.size() * models.size());
    segunc::run_indexed(images.size(), args.workers, [&](size_t i) {
        const std::string& image_id = images[i];
        try {
            segunc::SampleSet annotations =
                segunc::load_mask_dir(root / image_id / "annotations", threshold);
            for (size_t m = 0; m < models.size(); ++m) {
                segunc::SampleSet predictions = segunc::load_mask_dir(
                    root / image_id / "predictions" / models[m], threshold);
                segunc::GedReport report = segunc::ged_triple(annotations, predictions, *kind);
                rows[i * models.size() + m] =
                    segunc::make_report_row(image_id, models[m], report);
            }
        } catch (const segunc::IoError& e) {
            throw segunc::IoError(e.kind(), "image " + image_id + ": " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error("image " + image_id + ": " + e.what());
        }
        log_debug("eval: finished " + image_id);
    });

    segunc::write_report(rows, args.out);
    log_info("eval: wrote " + args.out);

    ordered_json summary;
    summary["schema_version"] = 1;
    summary["dataset"] = args.dataset;
    summary["estimator"] = segunc::to_string(*kind);
    summary["threshold"] = args.threshold;
    summary["n_images"] = images.size();
    summary["models"] = ordered_json::object();
    for (size_t m = 0; m < models.size(); ++m) {
        std::vector<double> ged_col, iou_col, det_col;
        uint64_t undefined_iou = 0;
        for (size_t i = 0; i < images.size(); ++i) {
            const segunc::ReportRow& row = rows[i * models.size() + m];
            ged_col.push_back(row.d2_ged);
            det_col.push_back(row.d2_det);
            if (row.d2_iou.has_value())
                iou_col.push_back(*row.d2_iou);
            else
                ++undefined_iou;
        }
        ordered_json block;
        block["d2_ged"] = column_summary(ged_col);
        block["d2_iou"] = column_summary(iou_col);
        block["d2_iou"]["undefined"] = undefined_iou;
        block["d2_det"] = column_summary(det_col);
        summary["models"][models[m]] = block;
    }
    fs::path summary_path = args.summary.empty()
                                ? fs::path(args.out).replace_extension(".summary.json")
                                : fs::path(args.summary);
    segunc::atomic_write(summary_path, summary.dump(2) + "\n");
    log_info("eval: wrote " + summary_path.string());
    return 0;
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyArgs {
    std::string dataset;
    std::string source = "annotations";
    unsigned bins = 16;
    unsigned threshold = 128;
    unsigned workers = 1;
    std::string out;
};

struct EntropySource {
    enum class Kind { annotations, model, probmap } kind = Kind::annotations;
    std::string name;
};

EntropySource parse_source(const std::string& spec) {
    EntropySource source;
    if (spec == "annotations") return source;
    if (spec.starts_with("model:")) {
        source.kind = EntropySource::Kind::model;
        source.name = spec.substr(6);
    } else if (spec.starts_with("probmap:")) {
        source.kind = EntropySource::Kind::probmap;
        source.name = spec.substr(8);
    } else {
        throw std::invalid_argument(
            "unknown source '" + spec +
            "' (expected annotations, model:<name>, or probmap:<name>)");
    }
    if (source.name.empty()) throw std::invalid_argument("source '" + spec + "': empty name");
    return source;
}

int run_entropy(const EntropyArgs& args) {
    fs::path root = args.dataset;
    EntropySource source = parse_source(args.source);
    std::vector<std::string> images = segunc::discover_images(root);
    auto threshold = uint8_t(args.threshold);

    fs::path out_dir = args.out;
    fs::create_directories(out_dir);
    log_info("entropy: " + std::to_string(images.size()) + " images, source " + args.source);

    std::vector<std::vector<segunc::HistogramBin>> histograms(images.size());
    segunc::run_indexed(images.size(), args.workers, [&](size_t i) {
        const std::string& image_id = images[i];
        try {
            segunc::ProbMap mean = [&] {
                switch (source.kind) {
                    case EntropySource::Kind::annotations:
                        return segunc::mean_map(
                            segunc::load_mask_dir(root / image_id / "annotations", threshold));
                    case EntropySource::Kind::model:
                        return segunc::mean_map(segunc::load_mask_dir(
                            root / image_id / "predictions" / source.name, threshold));
                    default: {
                        std::vector<segunc::ProbMap> maps = segunc::load_probmap_dir(
                            root / image_id / "probmaps" / source.name);
                        return segunc::mean_probmap(maps);
                    }
                }
            }();
            segunc::EntropyMap entropy = segunc::entropy_map(mean, segunc::LogBase::two);
            segunc::write_probmap(segunc::ProbMap(entropy.shape, entropy.values),
                                  out_dir / (image_id + ".pgm"));
            histograms[i] = segunc::entropy_histogram(entropy, args.bins);
        } catch (const segunc::IoError& e) {
            throw segunc::IoError(e.kind(), "image " + image_id + ": " + e.what());
        } catch (const std::exception& e) {
            throw std::runtime_error("image " + image_id + ": " + e.what());
        }
        log_debug("entropy: finished " + image_id);
    });

    std::string csv = "bin_lo,bin_hi,count\n";
    std::vector<segunc::HistogramBin> pooled;
    for (size_t i = 0; i < images.size(); ++i) {
        csv += "# " + images[i] + "\n";
        for (const segunc::HistogramBin& bin : histograms[i])
            csv += segunc::format_double(bin.lo) + "," + segunc::format_double(bin.hi) + "," +
                   std::to_string(bin.count) + "\n";
        if (pooled.empty()) pooled = histograms[i];
        else
            for (size_t b = 0; b < pooled.size(); ++b) pooled[b].count += histograms[i][b].count;
    }
    csv += "# pooled\n";
    for (const segunc::HistogramBin& bin : pooled)
        csv += segunc::format_double(bin.lo) + "," + segunc::format_double(bin.hi) + "," +
               std::to_string(bin.count) + "\n";
    segunc::atomic_write(out_dir / "histograms.csv", csv);
    log_info("entropy: wrote " + (out_dir / "histograms.csv").string());
    return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
    std::string report_a;
    std::string report_b;
    std::string metric = "ged";
    std::string alternative = "less";
    std::string model_a;
    std::string model_b;
    std::string out;
};

segunc::MetricKind metric_from_flag(const std::string& flag) {
    if (flag == "ged") return segunc::MetricKind::d2_ged;
    if (flag == "iou") return segunc::MetricKind::d2_iou;
    if (flag == "det") return segunc::MetricKind::d2_det;
    throw std::invalid_argument("unknown metric '" + flag + "'");
}

std::optional<double> row_metric(const segunc::ReportRow& row, segunc::MetricKind metric) {
    switch (metric) {
        case segunc::MetricKind::d2_ged: return row.d2_ged;
        case segunc::MetricKind::d2_iou: return row.d2_iou;
        default: return row.d2_det;
    }
}

// One model's per-image metric column out of a report that may hold several
// models. The model must be named when the report is not single-model.
std::map<std::string, std::optional<double>> report_column(const fs::path& path,
                                                           std::string& model,
                                                           segunc::MetricKind metric) {
    std::vector<segunc::ReportRow> rows = segunc::read_report(path);
    if (model.empty()) {
        std::set<std::string> names;
        for (const segunc::ReportRow& row : rows) names.insert(row.model);
        if (names.size() != 1) {
            std::string list;
            for (const std::string& n : names) list += (list.empty() ? "" : ", ") + n;
            throw std::invalid_argument(path.string() + ": holds " +
                                        std::to_string(names.size()) +
                                        " models (" + (list.empty() ? "none" : list) +
                                        "); pick one with --model-a/--model-b");
        }
        model = *names.begin();
    }
    std::map<std::string, std::optional<double>> column;
    for (const segunc::ReportRow& row : rows) {
        if (row.model != model) continue;
        if (!column.emplace(row.image_id, row_metric(row, metric)).second)
            throw std::invalid_argument(path.string() + ": duplicate rows for image '" +
                                        row.image_id + "', model '" + model + "'");
    }
    if (column.empty())
        throw std::invalid_argument(path.string() + ": no rows for model '" + model + "'");
    return column;
}

int run_compare(const CompareArgs& args) {
    segunc::MetricKind metric = metric_from_flag(args.metric);
    segunc::Alternative alternative = args.alternative == "less"
                                          ? segunc::Alternative::a_less
                                          : segunc::Alternative::a_greater;

    std::string model_a = args.model_a;
    std::string model_b = args.model_b;
    auto column_a = report_column(args.report_a, model_a, metric);
    auto column_b = report_column(args.report_b, model_b, metric);

    segunc::PairedSeries series;
    uint64_t dropped_undefined = 0;
    uint64_t n_common = 0;
    for (const auto& [image_id, value_a] : column_a) {
        auto it = column_b.find(image_id);
        if (it == column_b.end()) continue;
        ++n_common;
        if (!value_a.has_value() || !it->second.has_value()) {
            ++dropped_undefined;
            continue;
        }
        series.image_ids.push_back(image_id);
        series.values_a.push_back(*value_a);
        series.values_b.push_back(*it->second);
    }
    if (n_common == 0)
        throw std::invalid_argument("reports share no image ids");
    if (series.image_ids.empty())
        throw std::invalid_argument("metric " + std::string(segunc::to_string(metric)) +
                                    " undefined on every shared image");

    segunc::WilcoxonResult result = segunc::wilcoxon_one_sided(series, alternative);

    ordered_json out;
    out["schema_version"] = 1;
    out["metric"] = segunc::to_string(metric);
    out["alternative"] = args.alternative;
    out["model_a"] = model_a;
    out["model_b"] = model_b;
    out["n_common"] = n_common;
    out["n_dropped_undefined"] = dropped_undefined;
    out["w_statistic"] = result.w_statistic;
    out["p_value"] = result.p_value;
    out["log10_p"] = result.log10_p;
    out["n_effective"] = result.n_effective;
    out["n_zeros"] = result.n_zeros;
    out["mode"] = result.mode == segunc::PValueMode::exact ? "exact" : "normal_approx";

    std::string text = out.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!args.out.empty()) segunc::atomic_write(args.out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"segmentation uncertainty evaluation toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic annotated dataset");
    synth->add_option("--scenario", synth_args.scenario_path, "scenario JSON path")
        ->required()
        ->check(CLI::ExistingFile);
    synth->add_option("--out", synth_args.out_root, "dataset output root")->required();
    uint64_t seed_override = 0;
    CLI::Option* seed_opt =
        synth->add_option("--seed", seed_override, "override the scenario seed");
    synth->add_option("--workers", synth_args.workers, "worker threads")
        ->check(CLI::Range(1u, 256u));

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate predictions against annotations");
    eval->add_option("--dataset", eval_args.dataset, "dataset root")->required();
    eval->add_option("--models", eval_args.models, "model names (default: all discovered)")
        ->delimiter(',');
    eval->add_option("--estimator", eval_args.estimator, "expectation estimator")
        ->check(CLI::IsMember({"inclusive", "unbiased"}));
    eval->add_option("--threshold", eval_args.threshold, "mask binarization threshold")
        ->check(CLI::Range(0u, 255u));
    eval->add_option("--workers", eval_args.workers, "worker threads")
        ->check(CLI::Range(1u, 256u));
    eval->add_option("--out", eval_args.out, "report CSV path")->required();
    eval->add_option("--summary", eval_args.summary,
                     "summary JSON path (default: report path with .summary.json)");

    EntropyArgs entropy_args;
    CLI::App* entropy = app.add_subcommand("entropy", "per-image entropy maps and histograms");
    entropy->add_option("--dataset", entropy_args.dataset, "dataset root")->required();
    entropy->add_option("--source", entropy_args.source,
                        "annotations, model:<name>, or probmap:<name>");
    entropy->add_option("--bins", entropy_args.bins, "histogram bin count")
        ->check(CLI::Range(1u, 65536u));
    entropy->add_option("--threshold", entropy_args.threshold, "mask binarization threshold")
        ->check(CLI::Range(0u, 255u));
    entropy->add_option("--workers", entropy_args.workers, "worker threads")
        ->check(CLI::Range(1u, 256u));
    entropy->add_option("--out", entropy_args.out, "output directory")->required();

    CompareArgs compare_args;
    CLI::App* compare =
        app.add_subcommand("compare", "one-sided Wilcoxon signed-rank test on two reports");
    compare->add_option("report_a", compare_args.report_a, "first report CSV")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("report_b", compare_args.report_b, "second report CSV")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--metric", compare_args.metric, "metric column")
        ->check(CLI::IsMember({"ged", "iou", "det"}));
    compare->add_option("--alternative", compare_args.alternative,
                        "one-sided direction for report_a vs report_b")
        ->check(CLI::IsMember({"less", "greater"}));
    compare->add_option("--model-a", compare_args.model_a, "model name within report_a");
    compare->add_option("--model-b", compare_args.model_b, "model name within report_b");
    compare->add_option("--out", compare_args.out, "result JSON path (also printed to stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            if (seed_opt->count() > 0) synth_args.seed = seed_override;
            return run_synth(synth_args);
        }
        if (eval->parsed()) return run_eval(eval_args);
        if (entropy->parsed()) return run_entropy(entropy_args);
        if (compare->parsed()) return run_compare(compare_args);
    } catch (const std::exception& e) {
        log_at(LogLevel::error, e.what());
        return 1;
    }
    return 0;
}
