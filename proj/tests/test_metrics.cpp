#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "otalc/metrics.hpp"

using namespace otalc;
using namespace otalc::test;

namespace {

LabelStream random_stream(Rng& rng, ClassMapPtr map, FrameIndex len) {
    LabelStream stream;
    stream.class_map = map;
    const int c = map->size();
    while (stream.size() < len) {
        const ClassId cls = static_cast<ClassId>(rng() % static_cast<unsigned>(c));
        const FrameIndex run = 1 + static_cast<FrameIndex>(rng() % 10);
        for (FrameIndex i = 0; i < run && stream.size() < len; ++i) {
            stream.labels.push_back(cls);
        }
    }
    return stream;
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("frame accuracy") {
    const auto map = letter_map(2);
    CHECK(mof_accuracy(stream_of("ABBA", map), stream_of("ABBA", map)) == 1.0);
    CHECK(mof_accuracy(stream_of("AABB", map), stream_of("ABBB", map)) == doctest::Approx(0.75));
    CHECK(mof_accuracy(stream_of("AAAA", map), stream_of("BBBB", map)) == 0.0);
    CHECK(mof_accuracy(stream_of("", map), stream_of("", map)) == 1.0);
    CHECK_THROWS_AS(mof_accuracy(stream_of("A", map), stream_of("AA", map)),
                    std::invalid_argument);
}

TEST_CASE("segmental F1 on the constructed pair") {
    const auto map = letter_map(2);
    // gt: A[0..9] B[10..19]; pred: A[0..9] B[10..13] A[14] B[15..19]
    const auto gt = stream_of("AAAAAAAAAABBBBBBBBBB", map);
    const auto pred = stream_of("AAAAAAAAAABBBBABBBBB", map);

    const auto at_50 = count_segment_matches(pred, gt, 0.5);
    CHECK(at_50.tp == 2);
    CHECK(at_50.fp == 2);
    CHECK(at_50.fn == 0);
    const PrfScores scores = f1_at_iou(pred, gt, 0.5);
    CHECK(scores.precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(scores.recall == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scores.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // At 0.25 the early B fragment claims the gt segment first; the late one
    // finds it taken. Same counts, different matching.
    const auto at_25 = count_segment_matches(pred, gt, 0.25);
    CHECK(at_25.tp == 2);
    CHECK(at_25.fp == 2);
    CHECK(at_25.fn == 0);
}

TEST_CASE("segmental F1 edge conventions") {
    const auto map = letter_map(2);
    CHECK(f1_at_iou(stream_of("", map), stream_of("", map), 0.5).f1 == 1.0);
    CHECK(f1_at_iou(stream_of("AAAA", map), stream_of("AAAA", map), 1.0).f1 == 1.0);
    CHECK(f1_at_iou(stream_of("AAAA", map), stream_of("BBBB", map), 0.5).f1 == 0.0);
    CHECK_THROWS_AS(f1_at_iou(stream_of("A", map), stream_of("A", map), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(f1_at_iou(stream_of("A", map), stream_of("A", map), 1.5),
                    std::invalid_argument);
}

TEST_CASE("edit score") {
    const auto map = letter_map(4);
    CHECK(edit_score(stream_of("AABBCC", map), stream_of("ABC", map)) == 100.0);
    // segments [A,C] vs [A,B,C]: one insertion over max length 3
    CHECK(edit_score(stream_of("AC", map), stream_of("ABC", map)) ==
          doctest::Approx(100.0 * 2.0 / 3.0).epsilon(1e-12));
    // disjoint label sets of equal segment count: all substitutions
    CHECK(edit_score(stream_of("ACAC", map), stream_of("BDBD", map)) == 0.0);
    CHECK(edit_score(stream_of("", map), stream_of("", map)) == 100.0);
}

TEST_CASE("edit score ignores segment durations") {
    const auto map = letter_map(3);
    const double base = edit_score(stream_of("ABCA", map), stream_of("ABBC", map));
    const double stretched = edit_score(stream_of("AAABBBBCCCCCAAAA", map),
                                        stream_of("AABBBBBBCC", map));
    CHECK(base == stretched);
}

TEST_CASE("per-class segment scores via majority vote") {
    const auto map = letter_map(2);

    SUBCASE("majority vote tolerates boundary spill") {
        const auto gt = stream_of("AAAAABBBBB", map);
        const auto pred = stream_of("AAABBBBBBB", map);
        const PerClassReport rep = per_class_segment_prf(pred, gt);
        REQUIRE(rep.per_class.size() == 2);
        for (const auto& entry : rep.per_class) {
            CHECK(entry.scores.precision == 1.0);
            CHECK(entry.scores.recall == 1.0);
            CHECK(entry.scores.f1 == 1.0);
        }
        CHECK(rep.min.f1 == 1.0);
    }
    SUBCASE("identical streams score ones") {
        const auto gt = stream_of("AABBA", map);
        const PerClassReport rep = per_class_segment_prf(gt, gt);
        CHECK(rep.mean.f1 == 1.0);
        CHECK(rep.min.precision == 1.0);
    }
    SUBCASE("fully swapped votes score zeros") {
        const auto gt = stream_of("AAABBB", map);
        const auto pred = stream_of("BBBAAA", map);
        const PerClassReport rep = per_class_segment_prf(pred, gt);
        REQUIRE(rep.per_class.size() == 2);
        for (const auto& entry : rep.per_class) {
            CHECK(entry.scores.precision == 0.0);
            CHECK(entry.scores.recall == 0.0);
        }
    }
    SUBCASE("vote ties go to the lowest class id") {
        const auto gt = stream_of("BB", map);
        const auto pred = stream_of("AB", map);
        const PerClassReport rep = per_class_segment_prf(pred, gt);
        // vote A on a gt B segment
        for (const auto& entry : rep.per_class) {
            CHECK(entry.scores.f1 == 0.0);
        }
    }
}

TEST_CASE("report bundles the metrics") {
    const auto map = letter_map(2);
    const auto gt = stream_of("AAAAAAAAAABBBBBBBBBB", map);
    const auto pred = stream_of("AAAAAAAAAABBBBABBBBB", map);
    const MetricsReport rep = report(pred, gt);
    CHECK(rep.acc == doctest::Approx(19.0 / 20.0));
    CHECK(rep.at_threshold(0.5).f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rep.at_threshold(0.25).f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const MetricsReport perfect = report(gt, gt);
    CHECK(perfect.acc == 1.0);
    CHECK(perfect.edit == 100.0);
    for (const auto& [thr, scores] : perfect.f1_at) {
        (void)thr;
        CHECK(scores.f1 == 1.0);
    }

    const MetricsReport empty = report(stream_of("", map), stream_of("", map));
    CHECK(empty.acc == 1.0);
    CHECK(empty.edit == 100.0);
    CHECK(empty.at_threshold(0.5).f1 == 1.0);
}

TEST_CASE("report serialization formats") {
    const auto map = letter_map(2);
    const MetricsReport rep = report(stream_of("AABB", map), stream_of("AABB", map));
    CHECK(MetricsReport::csv_header(default_iou_thresholds()) == "acc,f1_010,f1_025,f1_050,edit");
    CHECK(rep.csv_row() == "1.0000,1.0000,1.0000,1.0000,100.0000");
    CHECK(rep.to_json() ==
          R"({"acc":1.0,"edit":100.0,"f1_010":1.0,"f1_025":1.0,"f1_050":1.0})");
}

TEST_CASE("threshold monotonicity on random pairs") {
    Rng rng(2024);
    const auto map = numbered_map(4);
    for (int round = 0; round < 100; ++round) {
        const FrameIndex len = 20 + static_cast<FrameIndex>(rng() % 120);
        const auto gt = random_stream(rng, map, len);
        const auto pred = random_stream(rng, map, len);
        double previous = 2.0;
        for (double thr : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const double f1 = f1_at_iou(pred, gt, thr).f1;
            CHECK(f1 <= previous + 1e-12);
            previous = f1;
        }
    }
}

TEST_CASE("a one-frame blip hurts segmental metrics more than accuracy") {
    const auto map = letter_map(3);
    LabelStream gt;
    gt.class_map = map;
    for (int s = 0; s < 4; ++s) {
        gt.labels.insert(gt.labels.end(), 25, static_cast<ClassId>(s % 2));
    }
    LabelStream pred = gt;
    pred.labels[40] = 2; // single wrong frame mid-segment

    const MetricsReport clean = report(gt, gt);
    const MetricsReport blipped = report(pred, gt);
    CHECK(blipped.acc == doctest::Approx(1.0 - 1.0 / 100.0));
    CHECK(blipped.edit < clean.edit);
    CHECK(blipped.at_threshold(0.5).f1 < clean.at_threshold(0.5).f1);
}

TEST_CASE("accumulator pools counts and averages edit") {
    const auto map = letter_map(2);
    const auto gt1 = stream_of("AAAAAAAAAABBBBBBBBBB", map);
    const auto pred1 = stream_of("AAAAAAAAAABBBBABBBBB", map);
    const auto gt2 = stream_of("AAAA", map);

    MetricsAccumulator acc;
    acc.add(pred1, gt1);
    acc.add(gt2, gt2);
    const MetricsReport pooled = acc.report();

    // frames: (19 + 4) / 24; counts at 0.5: tp 2+1, fp 2, fn 0
    CHECK(pooled.acc == doctest::Approx(23.0 / 24.0));
    CHECK(pooled.at_threshold(0.5).precision == doctest::Approx(3.0 / 5.0));
    CHECK(pooled.at_threshold(0.5).recall == doctest::Approx(1.0));
    const double edit1 = edit_score(pred1, gt1);
    CHECK(pooled.edit == doctest::Approx((edit1 + 100.0) / 2.0));

    CHECK(MetricsAccumulator().report().acc == 1.0);
    CHECK(MetricsAccumulator().report().edit == 100.0);
}

} // TEST_SUITE
