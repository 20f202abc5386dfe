#include "otalc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace otalc {
namespace fs = std::filesystem;

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::ifstream open_or_throw(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

} // namespace

ClassMap parse_mapping(std::istream& in, const std::string& source_name) {
    std::vector<std::pair<ClassId, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        long id = -1;
        std::string name;
        std::string extra;
        if (!(fields >> id >> name) || (fields >> extra)) {
            throw ParseError(source_name, line_no, "expected \"<id> <name>\", got \"" + line + "\"");
        }
        for (const auto& [seen_id, seen_name] : entries) {
            if (seen_id == id) {
                throw ParseError(source_name, line_no, "duplicate class id " + std::to_string(id));
            }
            if (seen_name == name) {
                throw ParseError(source_name, line_no, "duplicate class name " + name);
            }
        }
        entries.emplace_back(static_cast<ClassId>(id), name);
    }
    try {
        return ClassMap::from_pairs(std::move(entries));
    } catch (const std::invalid_argument& err) {
        throw ParseError(source_name, line_no, err.what());
    }
}

ClassMap parse_mapping_file(const fs::path& path) {
    auto in = open_or_throw(path);
    return parse_mapping(in, path.string());
}

LabelStream parse_labels(std::istream& in, ClassMapPtr class_map, const std::string& source_name) {
    LabelStream stream;
    stream.class_map = std::move(class_map);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            // one trailing blank line is the tolerated final newline
            if (in.peek() == std::char_traits<char>::eof()) {
                break;
            }
            throw ParseError(source_name, line_no, "blank line inside label file");
        }
        const auto id = stream.class_map ? stream.class_map->id_of(line) : std::nullopt;
        if (!id) {
            throw ParseError(source_name, line_no, "unknown label name \"" + line + "\"");
        }
        stream.labels.push_back(*id);
    }
    return stream;
}

LabelStream parse_labels_file(const fs::path& path, ClassMapPtr class_map) {
    auto in = open_or_throw(path);
    return parse_labels(in, std::move(class_map), path.string());
}

void write_labels_file(const fs::path& path, const LabelStream& stream) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (ClassId label : stream.labels) {
        out << stream.class_map->name(label) << '\n';
    }
}

std::vector<SoftmaxFrame> parse_softmax_csv(std::istream& in, int num_classes,
                                            const std::string& source_name) {
    std::vector<SoftmaxFrame> frames;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        SoftmaxFrame frame;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr != end) {
                throw ParseError(source_name, line_no, "bad probability \"" + cell + "\"");
            }
            frame.probs.push_back(value);
        }
        try {
            frame.validate(num_classes);
        } catch (const std::invalid_argument& err) {
            throw ParseError(source_name, line_no, err.what());
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

std::vector<SoftmaxFrame> parse_softmax_csv_file(const fs::path& path, int num_classes) {
    auto in = open_or_throw(path);
    return parse_softmax_csv(in, num_classes, path.string());
}

void write_softmax_csv_file(const fs::path& path, const std::vector<SoftmaxFrame>& frames) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.precision(9);
    for (const SoftmaxFrame& frame : frames) {
        for (std::size_t c = 0; c < frame.probs.size(); ++c) {
            if (c > 0) {
                out << ',';
            }
            out << frame.probs[c];
        }
        out << '\n';
    }
}

ClassLengthStats load_stats_file(const fs::path& path) {
    auto in = open_or_throw(path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return ClassLengthStats::from_json(text.str());
    } catch (const std::exception& err) {
        throw std::runtime_error(path.string() + ": " + err.what());
    }
}

void save_stats_file(const fs::path& path, const ClassLengthStats& stats) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << stats.to_json() << '\n';
}

std::string format_event(const CleanEvent& event, const ClassMap& class_map) {
    if (event.kind == CleanEvent::Kind::Append) {
        return "A " + std::to_string(event.from) + ' ' + class_map.name(event.label);
    }
    return "B " + std::to_string(event.from) + ' ' + std::to_string(event.to) + ' ' +
           class_map.name(event.label);
}

std::vector<fs::path> list_label_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<SequencePair> scan_dataset(const DatasetLayout& layout) {
    std::vector<SequencePair> pairs;
    for (const fs::path& pred : list_label_files(layout.pred_dir)) {
        const fs::path gt = layout.gt_dir / pred.filename();
        if (!fs::is_regular_file(gt)) {
            throw std::runtime_error("prediction " + pred.string() +
                                     " has no ground-truth file " + gt.string());
        }
        pairs.push_back({pred.stem().string(), gt, pred});
    }
    return pairs;
}

} // namespace otalc
