#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "segunc/entropy.hpp"
#include "segunc/rng.hpp"

using namespace segunc;

namespace {

BinaryMask random_mask(GridShape g, double density, SplitMix64& rng) {
    BinaryMask m(g);
    for (uint32_t r = 0; r < g.height; ++r)
        for (uint32_t c = 0; c < g.width; ++c)
            if (rng.next_unit() < density) m.set(r, c, true);
    return m;
}

}  // namespace

TEST_CASE("ProbMap validates and clamps") {
    GridShape g{2, 2};
    CHECK_THROWS_AS(ProbMap(g, std::vector<double>{0.1, 0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(ProbMap(g, {0.0, 0.5, 1.0, 1.1}), std::invalid_argument);
    CHECK_THROWS_AS(ProbMap(g, {0.0, 0.5, 1.0, -0.1}), std::invalid_argument);

    ProbMap clamped(g, {-1e-12, 1.0 + 1e-12, 0.25, 0.75});
    CHECK(clamped.at(0, 0) == 0.0);
    CHECK(clamped.at(0, 1) == 1.0);
}

TEST_CASE("binary entropy values") {
    GridShape g{1, 4};
    ProbMap p(g, {0.0, 1.0, 0.5, 0.25});

    EntropyMap bits = entropy_map(p, LogBase::two);
    CHECK(bits.values[0] == 0.0);
    CHECK(bits.values[1] == 0.0);
    CHECK(bits.values[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bits.values[3] == doctest::Approx(0.8112781244591328).epsilon(1e-15));

    EntropyMap nats = entropy_map(p, LogBase::natural);
    CHECK(nats.values[2] == doctest::Approx(std::numbers::ln2).epsilon(1e-15));
    CHECK(nats.values[3] == doctest::Approx(0.8112781244591328 * std::numbers::ln2)
                                .epsilon(1e-14));

    CHECK(max_entropy(LogBase::two) == 1.0);
    CHECK(max_entropy(LogBase::natural) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("entropy is symmetric in p and 1-p and peaks at 0.5") {
    GridShape g{1, 2};
    for (double p : {0.1, 0.3, 0.45}) {
        ProbMap pm(g, {p, 1.0 - p});
        EntropyMap e = entropy_map(pm);
        CHECK(e.values[0] == doctest::Approx(e.values[1]).epsilon(1e-14));
        CHECK(e.values[0] < 1.0);
        CHECK(e.values[0] > 0.0);
    }
}

TEST_CASE("mean_map counts foreground fractions per pixel") {
    GridShape g{3, 3};
    SplitMix64 rng(31);
    std::vector<BinaryMask> masks;
    for (int i = 0; i < 5; ++i) masks.push_back(random_mask(g, 0.4, rng));
    SampleSet s(masks);
    ProbMap mean = mean_map(s);
    for (uint32_t r = 0; r < g.height; ++r)
        for (uint32_t c = 0; c < g.width; ++c) {
            int count = 0;
            for (const BinaryMask& m : masks) count += m.get(r, c) ? 1 : 0;
            CHECK(mean.at(r, c) == double(count) / 5.0);
        }
}

TEST_CASE("identical masks give zero entropy everywhere") {
    GridShape g{4, 4};
    SplitMix64 rng(32);
    BinaryMask m = random_mask(g, 0.5, rng);
    SampleSet s(std::vector<BinaryMask>{m, m, m});
    EntropyMap e = entropy_map(mean_map(s));
    for (double v : e.values) CHECK(v == 0.0);
}

TEST_CASE("mean_probmap averages pixel-wise") {
    GridShape g{1, 2};
    std::vector<ProbMap> maps{ProbMap(g, {0.0, 1.0}), ProbMap(g, {0.5, 0.5}),
                              ProbMap(g, {1.0, 0.0})};
    ProbMap mean = mean_probmap(maps);
    CHECK(mean.at(0, 0) == doctest::Approx(0.5));
    CHECK(mean.at(0, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mean_probmap(std::vector<ProbMap>{}), std::invalid_argument);
}

TEST_CASE("mean of entropies never exceeds entropy of the mean") {
    SplitMix64 rng(33);
    GridShape g{4, 4};
    std::vector<ProbMap> maps;
    for (int i = 0; i < 6; ++i) {
        std::vector<double> v(g.pixels());
        for (double& x : v) x = rng.next_unit();
        maps.emplace_back(g, std::move(v));
    }
    EntropyMap upper = entropy_map(mean_probmap(maps));
    EntropyMap lower = mean_of_entropies(maps);
    for (size_t i = 0; i < upper.values.size(); ++i)
        CHECK(lower.values[i] <= upper.values[i] + 1e-12);
}

TEST_CASE("histogram covers [0, max] with a right-closed last bin") {
    GridShape g{1, 5};
    ProbMap p(g, {0.5, 0.5, 0.0, 0.25, 0.11});
    EntropyMap e = entropy_map(p);  // values: 1, 1, 0, 0.811..., ~0.4999

    std::vector<HistogramBin> h = entropy_histogram(e, 4);
    REQUIRE(h.size() == 4);
    CHECK(h[0].lo == 0.0);
    CHECK(h[3].hi == 1.0);
    uint64_t total = 0;
    for (const HistogramBin& bin : h) total += bin.count;
    CHECK(total == g.pixels());
    CHECK(h[3].count == 3);  // H(0.25) plus the two exact-1.0 entries
    CHECK(h[0].count == 1);  // the zero

    std::vector<HistogramBin> one = entropy_histogram(e, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].count == g.pixels());
    CHECK(one[0].lo == 0.0);
    CHECK(one[0].hi == 1.0);

    CHECK_THROWS_AS(entropy_histogram(e, 0), std::invalid_argument);
}

TEST_CASE("histogram bin edges are uniform in the entropy range") {
    GridShape g{1, 1};
    ProbMap p(g, {0.5});
    EntropyMap nats = entropy_map(p, LogBase::natural);
    std::vector<HistogramBin> h = entropy_histogram(nats, 5);
    for (size_t b = 0; b < h.size(); ++b) {
        CHECK(h[b].lo == doctest::Approx(std::numbers::ln2 * double(b) / 5.0));
        CHECK(h[b].hi == doctest::Approx(std::numbers::ln2 * double(b + 1) / 5.0));
    }
    CHECK(h.back().hi == std::numbers::ln2);
    CHECK(h.back().count == 1);  // max entropy lands in the closed last bin
}
