#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "segunc/io.hpp"
#include "segunc/rng.hpp"

using namespace segunc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("segunc_io_" + std::to_string(SplitMix64(uintptr_t(this))
                                                  .next_u64()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size()));
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BinaryMask random_mask(GridShape g, SplitMix64& rng) {
    BinaryMask m(g);
    for (uint32_t r = 0; r < g.height; ++r)
        for (uint32_t c = 0; c < g.width; ++c)
            if (rng.next_below(2) == 0) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_CASE("mask PGM decode of a literal file") {
    TempDir tmp;
    fs::path p = tmp.path / "m.pgm";
    std::string payload = "P5\n2 2\n255\n";
    payload += char(255);
    payload += char(0);
    payload += char(0);
    payload += char(255);
    write_bytes(p, payload);

    BinaryMask m = read_mask(p);
    CHECK(m.shape() == GridShape{2, 2});
    CHECK(m.get(0, 0));
    CHECK_FALSE(m.get(0, 1));
    CHECK_FALSE(m.get(1, 0));
    CHECK(m.get(1, 1));
}

TEST_CASE("mask PGM header tolerates comments and mixed whitespace") {
    TempDir tmp;
    fs::path p = tmp.path / "c.pgm";
    std::string payload = "P5 # binary pgm\n# another remark\n 2\t1 # sizes\n255\n";
    payload += char(200);
    payload += char(10);
    write_bytes(p, payload);
    BinaryMask m = read_mask(p);
    CHECK(m.shape() == GridShape{1, 2});
    CHECK(m.get(0, 0));
    CHECK_FALSE(m.get(0, 1));
}

TEST_CASE("mask read error kinds are distinct") {
    TempDir tmp;

    auto kind_of = [&](const std::string& name, const std::string& bytes) {
        fs::path p = tmp.path / name;
        write_bytes(p, bytes);
        try {
            read_mask(p);
        } catch (const IoError& e) {
            return e.kind();
        }
        return IoErrorKind::open_failed;  // no throw: wrong, surfaces below
    };

    CHECK(kind_of("magic.pgm", "P6\n2 2\n255\n----") == IoErrorKind::bad_magic);
    CHECK(kind_of("header.pgm", "P5\nx 2\n255\n----") == IoErrorKind::bad_header);
    CHECK(kind_of("zero.pgm", "P5\n0 2\n255\n") == IoErrorKind::bad_header);
    CHECK(kind_of("maxval.pgm", "P5\n2 2\n65535\n----") == IoErrorKind::bad_maxval);
    CHECK(kind_of("short.pgm", std::string("P5\n4 4\n255\n") + std::string(8, '\0')) ==
          IoErrorKind::truncated);

    try {
        read_mask(tmp.path / "missing.pgm");
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::open_failed);
    }
}

TEST_CASE("mask round-trip is exact") {
    TempDir tmp;
    SplitMix64 rng(61);
    for (GridShape g : {GridShape{1, 1}, GridShape{7, 5}, GridShape{16, 33}}) {
        BinaryMask m = random_mask(g, rng);
        fs::path p = tmp.path / "rt.pgm";
        write_mask(m, p);
        CHECK(read_mask(p) == m);
    }
}

TEST_CASE("read_mask threshold is configurable") {
    TempDir tmp;
    fs::path p = tmp.path / "t.pgm";
    std::string payload = "P5\n2 1\n255\n";
    payload += char(100);
    payload += char(180);
    write_bytes(p, payload);
    BinaryMask strict = read_mask(p, 200);
    CHECK(strict.foreground_count() == 0);
    BinaryMask loose = read_mask(p, 100);
    CHECK(loose.foreground_count() == 2);
}

TEST_CASE("probmap quantization and endianness") {
    TempDir tmp;
    fs::path p = tmp.path / "p.pgm";
    GridShape g{1, 3};
    write_probmap(ProbMap(g, {0.0, 0.5, 1.0}), p);

    std::string bytes = read_bytes(p);
    std::string header = "P5\n3 1\n65535\n";
    REQUIRE(bytes.size() == header.size() + 6);
    CHECK(bytes.substr(0, header.size()) == header);
    const auto* v = reinterpret_cast<const uint8_t*>(bytes.data() + header.size());
    CHECK((uint32_t(v[0]) << 8 | v[1]) == 0);
    CHECK((uint32_t(v[2]) << 8 | v[3]) == 32768);  // 0.5*65535 rounds half away from zero
    CHECK((uint32_t(v[4]) << 8 | v[5]) == 65535);

    ProbMap back = read_probmap(p);
    CHECK(back.at(0, 0) == 0.0);
    CHECK(back.at(0, 2) == 1.0);
    CHECK(back.at(0, 1) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("probmap round-trip error stays within the quantization bound") {
    TempDir tmp;
    SplitMix64 rng(62);
    GridShape g{9, 11};
    std::vector<double> values(g.pixels());
    for (double& v : values) v = rng.next_unit();
    ProbMap original(g, values);
    fs::path p = tmp.path / "q.pgm";
    write_probmap(original, p);
    ProbMap back = read_probmap(p);
    for (uint64_t i = 0; i < g.pixels(); ++i)
        CHECK(std::fabs(back.values()[i] - original.values()[i]) <= 1.0 / 131070.0);
}

TEST_CASE("probmap maxval must be 65535") {
    TempDir tmp;
    fs::path p = tmp.path / "bad.pgm";
    write_bytes(p, std::string("P5\n1 1\n255\n") + char(0));
    try {
        read_probmap(p);
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::bad_maxval);
    }
}

TEST_CASE("report round-trip preserves every cell") {
    TempDir tmp;
    fs::path p = tmp.path / "report.csv";
    GedReport g1;
    g1.d2_ged = 1.0 / 3.0;
    g1.d2_iou = 0.1234567890123456789;
    g1.d2_det = 0.125;
    g1.n_annotations = 4;
    g1.n_predictions = 6;
    g1.p_empty_ann = 0.5;
    g1.p_empty_pred = 1.0 / 7.0;
    g1.kind = EstimatorKind::unbiased;
    GedReport g2;  // defaults, undefined d2_iou
    std::vector<ReportRow> rows{make_report_row("img_000000", "oracle", g1),
                                make_report_row("img_000001", "baseline", g2)};
    write_report(rows, p);

    std::vector<ReportRow> back = read_report(p);
    REQUIRE(back.size() == 2);
    CHECK(back[0].image_id == "img_000000");
    CHECK(back[0].model == "oracle");
    CHECK(back[0].d2_ged == rows[0].d2_ged);
    CHECK(back[0].d2_iou == rows[0].d2_iou);
    CHECK(back[0].d2_det == rows[0].d2_det);
    CHECK(back[0].n_ann == 4);
    CHECK(back[0].n_pred == 6);
    CHECK(back[0].p_empty_ann == 0.5);
    CHECK(back[0].p_empty_pred == rows[0].p_empty_pred);
    CHECK(back[0].estimator == EstimatorKind::unbiased);
    CHECK_FALSE(back[1].d2_iou.has_value());
    CHECK(back[1].estimator == EstimatorKind::inclusive);
}

TEST_CASE("empty report is just the header") {
    TempDir tmp;
    fs::path p = tmp.path / "empty.csv";
    write_report({}, p);
    CHECK(read_bytes(p) ==
          "image_id,model,d2_ged,d2_iou,d2_det,n_ann,n_pred,p_empty_ann,p_empty_pred,"
          "estimator\n");
    CHECK(read_report(p).empty());
}

TEST_CASE("report parser rejects malformed input") {
    TempDir tmp;
    auto kind_of = [&](const std::string& name, const std::string& content) {
        fs::path p = tmp.path / name;
        write_bytes(p, content);
        try {
            read_report(p);
        } catch (const IoError& e) {
            return e.kind();
        }
        return IoErrorKind::open_failed;
    };
    const std::string header =
        "image_id,model,d2_ged,d2_iou,d2_det,n_ann,n_pred,p_empty_ann,p_empty_pred,"
        "estimator\n";
    CHECK(kind_of("h.csv", "image_id,model\n") == IoErrorKind::bad_header);
    CHECK(kind_of("empty.csv", "") == IoErrorKind::bad_header);
    CHECK(kind_of("cells.csv", header + "img,oracle,0.1\n") == IoErrorKind::bad_cell);
    CHECK(kind_of("num.csv", header + "img,oracle,zero,,0,1,1,0,0,inclusive\n") ==
          IoErrorKind::bad_cell);
    CHECK(kind_of("est.csv", header + "img,oracle,0,,0,1,1,0,0,other\n") ==
          IoErrorKind::bad_cell);
}

TEST_CASE("format_double survives a parse round-trip") {
    SplitMix64 rng(63);
    for (int i = 0; i < 1000; ++i) {
        double v = std::ldexp(rng.next_unit(), int(rng.next_below(40)) - 20);
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("dataset discovery is sorted and layout errors are flagged") {
    TempDir tmp;
    fs::create_directories(tmp.path / "img_2" / "predictions" / "zeta");
    fs::create_directories(tmp.path / "img_0" / "predictions" / "alpha");
    fs::create_directories(tmp.path / "img_1");
    write_bytes(tmp.path / "stray.txt", "not a dir");

    CHECK(discover_images(tmp.path) ==
          std::vector<std::string>{"img_0", "img_1", "img_2"});
    CHECK(discover_models(tmp.path) == std::vector<std::string>{"alpha", "zeta"});

    try {
        discover_images(tmp.path / "nope");
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::bad_layout);
    }
}

TEST_CASE("load_mask_dir uses lexicographic file order") {
    TempDir tmp;
    fs::path dir = tmp.path / "annotations";
    fs::create_directories(dir);
    GridShape g{2, 2};
    BinaryMask a(g), b(g);
    a.set(0, 0, true);
    b.set(1, 1, true);
    // write b first: enumeration order must not matter
    write_mask(b, dir / "a_01.pgm");
    write_mask(a, dir / "a_00.pgm");
    SampleSet s = load_mask_dir(dir);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == a);
    CHECK(s[1] == b);

    fs::path empty_dir = tmp.path / "none";
    fs::create_directories(empty_dir);
    try {
        load_mask_dir(empty_dir);
        CHECK(false);
    } catch (const IoError& e) {
        CHECK(e.kind() == IoErrorKind::bad_layout);
    }
}

TEST_CASE("atomic_write leaves no temp file behind") {
    TempDir tmp;
    fs::path p = tmp.path / "out.txt";
    atomic_write(p, "hello");
    CHECK(read_bytes(p) == "hello");
    atomic_write(p, "replaced");
    CHECK(read_bytes(p) == "replaced");
    size_t files = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
}
