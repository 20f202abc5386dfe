#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "otalc/baselines.hpp"
#include "otalc/cleaner.hpp"
#include "otalc/core.hpp"
#include "otalc/cutoffs.hpp"

namespace otalc {

// File-format error carrying the source name and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// Mapping file: one "<id> <name>" per line, ids dense from 0.
ClassMap parse_mapping(std::istream& in, const std::string& source_name);
ClassMap parse_mapping_file(const std::filesystem::path& path);

// Label file: one class name per line (trailing newline tolerated).
LabelStream parse_labels(std::istream& in, ClassMapPtr class_map, const std::string& source_name);
LabelStream parse_labels_file(const std::filesystem::path& path, ClassMapPtr class_map);

void write_labels_file(const std::filesystem::path& path, const LabelStream& stream);

// Softmax file: CSV, one row per frame, C columns, no header.
std::vector<SoftmaxFrame> parse_softmax_csv(std::istream& in, int num_classes,
                                            const std::string& source_name);
std::vector<SoftmaxFrame> parse_softmax_csv_file(const std::filesystem::path& path,
                                                 int num_classes);
void write_softmax_csv_file(const std::filesystem::path& path,
                            const std::vector<SoftmaxFrame>& frames);

ClassLengthStats load_stats_file(const std::filesystem::path& path);
void save_stats_file(const std::filesystem::path& path, const ClassLengthStats& stats);

// Wire line for one clean event, without the terminating newline:
// "A <t> <name>" for an append, "B <from> <to> <name>" for a backdate.
std::string format_event(const CleanEvent& event, const ClassMap& class_map);

// Directory layout: per-sequence label files under gt_dir, same-named
// prediction files under pred_dir, plus the class mapping file.
struct DatasetLayout {
    std::filesystem::path gt_dir;
    std::filesystem::path pred_dir;
    std::filesystem::path mapping_file;
};

struct SequencePair {
    std::string name; // file stem, used for reporting
    std::filesystem::path gt;
    std::filesystem::path pred;
};

// Every prediction file must have a same-named ground-truth file; throws
// std::runtime_error naming the first one that does not. Sorted by name.
std::vector<SequencePair> scan_dataset(const DatasetLayout& layout);

// Label files of one directory, sorted by name.
std::vector<std::filesystem::path> list_label_files(const std::filesystem::path& dir);

} // namespace otalc
