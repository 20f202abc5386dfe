#include "otalc/core.hpp"

#include <cctype>
#include <stdexcept>

namespace otalc {
namespace {

bool valid_class_name(const std::string& name) {
    if (name.empty()) {
        return false;
    }
    for (unsigned char ch : name) {
        if (std::isspace(ch)) {
            return false;
        }
    }
    return true;
}

} // namespace

ClassMap ClassMap::from_names(std::vector<std::string> names) {
    ClassMap map;
    map.names_ = std::move(names);
    map.index_.reserve(map.names_.size());
    for (std::size_t i = 0; i < map.names_.size(); ++i) {
        const std::string& name = map.names_[i];
        if (!valid_class_name(name)) {
            throw std::invalid_argument("class name at id " + std::to_string(i) +
                                        " is empty or contains whitespace");
        }
        auto [it, inserted] = map.index_.emplace(name, static_cast<ClassId>(i));
        if (!inserted) {
            throw std::invalid_argument("duplicate class name: " + name);
        }
    }
    return map;
}

ClassMap ClassMap::from_pairs(std::vector<std::pair<ClassId, std::string>> entries) {
    std::vector<std::string> names(entries.size());
    std::vector<bool> seen(entries.size(), false);
    for (auto& [id, name] : entries) {
        if (id < 0 || static_cast<std::size_t>(id) >= entries.size()) {
            throw std::invalid_argument("class ids must be dense from 0; got id " +
                                        std::to_string(id) + " among " +
                                        std::to_string(entries.size()) + " entries");
        }
        if (seen[static_cast<std::size_t>(id)]) {
            throw std::invalid_argument("duplicate class id: " + std::to_string(id));
        }
        seen[static_cast<std::size_t>(id)] = true;
        names[static_cast<std::size_t>(id)] = std::move(name);
    }
    return from_names(std::move(names));
}

ClassMap ClassMap::numbered(int count, std::string_view prefix) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        names.push_back(std::string(prefix) + std::to_string(i));
    }
    return from_names(std::move(names));
}

const std::string& ClassMap::name(ClassId id) const {
    if (id < 0 || id >= size()) {
        throw std::out_of_range("class id " + std::to_string(id) + " outside vocabulary of " +
                                std::to_string(size()));
    }
    return names_[static_cast<std::size_t>(id)];
}

std::optional<ClassId> ClassMap::id_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<Segment> rle_segments(const LabelStream& stream) {
    std::vector<Segment> segments;
    const FrameIndex n = stream.size();
    FrameIndex start = 0;
    for (FrameIndex t = 1; t <= n; ++t) {
        if (t == n || stream.labels[static_cast<std::size_t>(t)] !=
                          stream.labels[static_cast<std::size_t>(start)]) {
            segments.push_back({stream.labels[static_cast<std::size_t>(start)], start, t - 1});
            start = t;
        }
    }
    return segments;
}

LabelStream labels_from_segments(const std::vector<Segment>& segments, ClassMapPtr class_map) {
    LabelStream stream;
    stream.class_map = std::move(class_map);
    const int num_classes = stream.num_classes();
    FrameIndex next = 0;
    for (const Segment& seg : segments) {
        if (seg.start != next) {
            throw std::invalid_argument("segments must tile contiguously: expected start " +
                                        std::to_string(next) + ", got " +
                                        std::to_string(seg.start));
        }
        if (seg.end < seg.start) {
            throw std::invalid_argument("segment end " + std::to_string(seg.end) +
                                        " precedes start " + std::to_string(seg.start));
        }
        if (seg.label < 0 || seg.label >= num_classes) {
            throw std::invalid_argument("segment label " + std::to_string(seg.label) +
                                        " outside vocabulary of " + std::to_string(num_classes));
        }
        stream.labels.insert(stream.labels.end(), static_cast<std::size_t>(seg.length()),
                             seg.label);
        next = seg.end + 1;
    }
    return stream;
}

std::optional<StreamFault> validate_stream(const LabelStream& stream) {
    const int num_classes = stream.num_classes();
    for (FrameIndex t = 0; t < stream.size(); ++t) {
        const ClassId label = stream.labels[static_cast<std::size_t>(t)];
        if (label < 0 || label >= num_classes) {
            return StreamFault{t, "label " + std::to_string(label) + " at frame " +
                                      std::to_string(t) + " outside vocabulary of " +
                                      std::to_string(num_classes)};
        }
    }
    return std::nullopt;
}

} // namespace otalc
