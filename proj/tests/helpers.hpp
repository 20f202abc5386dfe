#pragma once

#include <memory>
#include <string>
#include <vector>

#include "otalc/core.hpp"

namespace otalc::test {

// Vocabulary "A".."A"+count-1 for letter-coded streams.
inline ClassMapPtr letter_map(int count) {
    std::vector<std::string> names;
    for (int i = 0; i < count; ++i) {
        names.push_back(std::string(1, static_cast<char>('A' + i)));
    }
    return std::make_shared<const ClassMap>(ClassMap::from_names(std::move(names)));
}

// "AABBA" -> labels {0,0,1,1,0} over letter_map.
inline LabelStream stream_of(const std::string& letters, ClassMapPtr map) {
    LabelStream stream;
    stream.class_map = std::move(map);
    for (char ch : letters) {
        stream.labels.push_back(static_cast<ClassId>(ch - 'A'));
    }
    return stream;
}

inline ClassMapPtr numbered_map(int count) {
    return std::make_shared<const ClassMap>(ClassMap::numbered(count));
}

inline LabelStream stream_from(std::vector<ClassId> labels, ClassMapPtr map) {
    return LabelStream{std::move(labels), std::move(map)};
}

} // namespace otalc::test
