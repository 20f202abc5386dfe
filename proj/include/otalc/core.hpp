#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace otalc {

using ClassId = std::int32_t;
using FrameIndex = std::int64_t;

// Shared RNG type. Samplers and generators take a caller-owned engine so that
// every draw sequence is reproducible from a seed.
using Rng = std::mt19937_64;

// Dense class vocabulary: ids are exactly 0..C-1, names are unique, non-empty
// and contain no whitespace.
class ClassMap {
public:
    ClassMap() = default;

    // Names in id order; throws std::invalid_argument on a bad name.
    static ClassMap from_names(std::vector<std::string> names);

    // (id, name) pairs in any order; ids must be dense from 0.
    static ClassMap from_pairs(std::vector<std::pair<ClassId, std::string>> entries);

    // Synthetic vocabulary "c0".."c{count-1}" for tests and generated data.
    static ClassMap numbered(int count, std::string_view prefix = "c");

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(ClassId id) const;
    std::optional<ClassId> id_of(std::string_view name) const;

    friend bool operator==(const ClassMap& a, const ClassMap& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ClassId> index_;
};

using ClassMapPtr = std::shared_ptr<const ClassMap>;

// A causal sequence of per-frame class ids plus its vocabulary. The universal
// currency between modules; frames are the only time unit.
struct LabelStream {
    std::vector<ClassId> labels;
    ClassMapPtr class_map;

    FrameIndex size() const { return static_cast<FrameIndex>(labels.size()); }
    bool empty() const { return labels.empty(); }
    int num_classes() const { return class_map ? class_map->size() : 0; }

    friend bool operator==(const LabelStream& a, const LabelStream& b) {
        return a.labels == b.labels;
    }
};

// Maximal run of one class. Ends are inclusive, so length = end - start + 1.
struct Segment {
    ClassId label = 0;
    FrameIndex start = 0;
    FrameIndex end = 0;

    FrameIndex length() const { return end - start + 1; }
    bool operator==(const Segment&) const = default;
};

// Run-length encode a stream into maximal segments tiling [0, N-1].
std::vector<Segment> rle_segments(const LabelStream& stream);

// Inverse of rle_segments. Segments must tile a prefix [0, N-1] contiguously;
// throws std::invalid_argument on a gap, overlap, or out-of-range label.
LabelStream labels_from_segments(const std::vector<Segment>& segments, ClassMapPtr class_map);

struct StreamFault {
    FrameIndex frame = 0;
    std::string message;
};

// nullopt when every invariant holds; otherwise the first offending frame.
std::optional<StreamFault> validate_stream(const LabelStream& stream);

} // namespace otalc
