#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "otalc/core.hpp"

using namespace otalc;
using namespace otalc::test;

TEST_SUITE("core") {

TEST_CASE("class map construction and lookup") {
    const auto map = ClassMap::from_names({"cut", "peel", "stir"});
    CHECK(map.size() == 3);
    CHECK(map.name(1) == "peel");
    CHECK(map.id_of("stir") == ClassId{2});
    CHECK(!map.id_of("chop"));

    CHECK_THROWS_AS(ClassMap::from_names({"cut", "cut"}), std::invalid_argument);
    CHECK_THROWS_AS(ClassMap::from_names({"has space"}), std::invalid_argument);
    CHECK_THROWS_AS(ClassMap::from_names({""}), std::invalid_argument);
    CHECK_THROWS_AS(ClassMap::from_pairs({{0, "a"}, {2, "b"}}), std::invalid_argument);
    CHECK_THROWS_AS(ClassMap::from_pairs({{0, "a"}, {0, "b"}}), std::invalid_argument);
}

TEST_CASE("rle of the empty stream") {
    const LabelStream empty{{}, numbered_map(0)};
    CHECK(rle_segments(empty).empty());
}

TEST_CASE("rle of a single run") {
    const auto map = numbered_map(3);
    const auto segs = rle_segments(stream_from({2, 2, 2}, map));
    REQUIRE(segs.size() == 1);
    CHECK(segs[0] == Segment{2, 0, 2});
}

TEST_CASE("rle splits maximal runs") {
    const auto map = numbered_map(2);
    const auto segs = rle_segments(stream_from({0, 0, 1, 0}, map));
    REQUIRE(segs.size() == 3);
    CHECK(segs[0] == Segment{0, 0, 1});
    CHECK(segs[1] == Segment{1, 2, 2});
    CHECK(segs[2] == Segment{0, 3, 3});
}

TEST_CASE("labels_from_segments inverts rle") {
    const auto map = numbered_map(2);
    CHECK(labels_from_segments({}, map).empty());
    CHECK(labels_from_segments({{1, 0, 4}}, map).labels == std::vector<ClassId>{1, 1, 1, 1, 1});
    CHECK(labels_from_segments({{0, 0, 1}, {1, 2, 2}, {0, 3, 3}}, map).labels ==
          std::vector<ClassId>{0, 0, 1, 0});
}

TEST_CASE("labels_from_segments rejects malformed tilings") {
    const auto map = numbered_map(2);
    CHECK_THROWS_AS(labels_from_segments({{0, 1, 2}}, map), std::invalid_argument); // gap at 0
    CHECK_THROWS_AS(labels_from_segments({{0, 0, 2}, {1, 2, 3}}, map), std::invalid_argument);
    CHECK_THROWS_AS(labels_from_segments({{0, 0, 2}, {1, 4, 5}}, map), std::invalid_argument);
    CHECK_THROWS_AS(labels_from_segments({{5, 0, 2}}, map), std::invalid_argument);
    CHECK_THROWS_AS(labels_from_segments({{0, 2, 0}}, map), std::invalid_argument);
}

TEST_CASE("validate_stream reports the first bad frame") {
    const auto map = numbered_map(2);
    CHECK(!validate_stream(stream_from({0, 1, 0}, map)));
    const auto fault = validate_stream(stream_from({0, 5}, map));
    REQUIRE(fault.has_value());
    CHECK(fault->frame == 1);

    const LabelStream empty{{}, numbered_map(0)};
    CHECK(!validate_stream(empty));
}

TEST_CASE("rle round trip on random streams") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 200; ++round) {
        const int num_classes = 1 + static_cast<int>(rng() % 6);
        const auto map = numbered_map(num_classes);
        std::vector<ClassId> labels(rng() % 80);
        for (auto& label : labels) {
            label = static_cast<ClassId>(rng() % static_cast<unsigned>(num_classes));
        }
        const LabelStream stream = stream_from(labels, map);
        const auto segs = rle_segments(stream);

        CHECK(labels_from_segments(segs, map) == stream);

        FrameIndex total = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].length();
            if (i > 0) {
                CHECK(segs[i].label != segs[i - 1].label);
                CHECK(segs[i].start == segs[i - 1].end + 1);
            }
        }
        CHECK(total == stream.size());
        CHECK(segs.size() <= labels.size());
    }
}

} // TEST_SUITE
