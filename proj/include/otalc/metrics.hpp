#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "otalc/core.hpp"

namespace otalc {

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Segmental true/false positives and false negatives at one IoU threshold.
struct MatchCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

// Precision/recall/F1 from pooled counts. All-zero counts score 1 (nothing
// predicted, nothing to find); any other zero denominator scores 0.
PrfScores prf_from_counts(const MatchCounts& counts);

// Evaluation bundle: frame accuracy, segmental F1 per IoU threshold, and the
// segmental edit score in [0, 100].
struct MetricsReport {
    double acc = 0.0;
    std::vector<std::pair<double, PrfScores>> f1_at; // sorted by threshold
    double edit = 0.0;

    const PrfScores& at_threshold(double threshold) const;

    // "acc,f1_010,f1_025,f1_050,edit" with four decimal places.
    std::string csv_row() const;
    static std::string csv_header(const std::vector<double>& thresholds);
    std::string to_json() const;
};

std::vector<double> default_iou_thresholds(); // {0.1, 0.25, 0.5}

// Fraction of frames where pred matches gt; empty streams score 1.
// Throws std::invalid_argument on a length or vocabulary mismatch.
double mof_accuracy(const LabelStream& pred, const LabelStream& gt);

// Segmental matching: predicted segments are evaluated in temporal order and
// each claims the highest-IoU unmatched ground-truth segment of its class
// (earliest on an IoU tie). The claim counts as a true positive when the IoU
// meets the threshold; otherwise the prediction is a false positive and the
// ground-truth segment stays available. Unmatched ground-truth segments are
// false negatives.
MatchCounts count_segment_matches(const LabelStream& pred, const LabelStream& gt,
                                  double threshold);

PrfScores f1_at_iou(const LabelStream& pred, const LabelStream& gt, double threshold);

// 100 * (1 - levenshtein(pred segment labels, gt segment labels) / max len);
// invariant to segment durations. Both empty scores 100.
double edit_score(const LabelStream& pred, const LabelStream& gt);

// Per-class precision/recall/F1 over segment-level votes: each ground-truth
// segment is assigned the majority predicted frame label within its bounds
// (ties to the lowest class id).
struct PerClassReport {
    struct Entry {
        ClassId cls = 0;
        PrfScores scores;
    };
    std::vector<Entry> per_class; // classes appearing in any (gt, vote) pair
    PrfScores mean;
    PrfScores min;
};

PerClassReport per_class_segment_prf(const LabelStream& pred, const LabelStream& gt);

MetricsReport report(const LabelStream& pred, const LabelStream& gt,
                     const std::vector<double>& thresholds = default_iou_thresholds());

// Multi-sequence pooling: frames and match counts are pooled before the
// ratios; edit scores are averaged per sequence.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(std::vector<double> thresholds = default_iou_thresholds());

    void add(const LabelStream& pred, const LabelStream& gt);
    MetricsReport report() const;
    std::int64_t sequences() const { return sequences_; }

private:
    std::vector<double> thresholds_;
    std::vector<MatchCounts> counts_;
    std::int64_t frames_ = 0;
    std::int64_t correct_ = 0;
    std::int64_t sequences_ = 0;
    double edit_sum_ = 0.0;
};

} // namespace otalc
