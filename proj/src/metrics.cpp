#include "otalc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace otalc {
namespace {

void require_comparable(const LabelStream& pred, const LabelStream& gt) {
    if (pred.size() != gt.size()) {
        throw std::invalid_argument("stream length mismatch: pred has " +
                                    std::to_string(pred.size()) + " frames, gt has " +
                                    std::to_string(gt.size()));
    }
    if (pred.class_map && gt.class_map && !(*pred.class_map == *gt.class_map)) {
        throw std::invalid_argument("pred and gt use different vocabularies");
    }
}

std::string f1_column_name(double threshold) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "f1_%03d", static_cast<int>(std::lround(threshold * 100.0)));
    return buf;
}

std::string fixed4(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

} // namespace

PrfScores prf_from_counts(const MatchCounts& counts) {
    if (counts.tp == 0 && counts.fp == 0 && counts.fn == 0) {
        return {1.0, 1.0, 1.0};
    }
    PrfScores scores;
    const double tp = static_cast<double>(counts.tp);
    scores.precision = counts.tp + counts.fp > 0 ? tp / static_cast<double>(counts.tp + counts.fp) : 0.0;
    scores.recall = counts.tp + counts.fn > 0 ? tp / static_cast<double>(counts.tp + counts.fn) : 0.0;
    const double pr = scores.precision + scores.recall;
    scores.f1 = pr > 0.0 ? 2.0 * scores.precision * scores.recall / pr : 0.0;
    return scores;
}

const PrfScores& MetricsReport::at_threshold(double threshold) const {
    for (const auto& [thr, scores] : f1_at) {
        if (std::abs(thr - threshold) < 1e-12) {
            return scores;
        }
    }
    throw std::out_of_range("report holds no F1 at threshold " + std::to_string(threshold));
}

std::string MetricsReport::csv_row() const {
    std::string row = fixed4(acc);
    for (const auto& [thr, scores] : f1_at) {
        (void)thr;
        row += ',' + fixed4(scores.f1);
    }
    row += ',' + fixed4(edit);
    return row;
}

std::string MetricsReport::csv_header(const std::vector<double>& thresholds) {
    std::string header = "acc";
    for (double thr : thresholds) {
        header += ',' + f1_column_name(thr);
    }
    header += ",edit";
    return header;
}

std::string MetricsReport::to_json() const {
    nlohmann::json doc;
    doc["acc"] = acc;
    for (const auto& [thr, scores] : f1_at) {
        doc[f1_column_name(thr)] = scores.f1;
    }
    doc["edit"] = edit;
    return doc.dump();
}

std::vector<double> default_iou_thresholds() {
    return {0.1, 0.25, 0.5};
}

double mof_accuracy(const LabelStream& pred, const LabelStream& gt) {
    require_comparable(pred, gt);
    if (gt.empty()) {
        return 1.0;
    }
    std::int64_t correct = 0;
    for (std::size_t t = 0; t < gt.labels.size(); ++t) {
        correct += pred.labels[t] == gt.labels[t] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(gt.size());
}

namespace {

double segment_iou(const Segment& a, const Segment& b) {
    const FrameIndex inter =
        std::min(a.end, b.end) - std::max(a.start, b.start) + 1;
    if (inter <= 0) {
        return 0.0;
    }
    const FrameIndex uni = std::max(a.end, b.end) - std::min(a.start, b.start) + 1;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

MatchCounts count_segment_matches(const LabelStream& pred, const LabelStream& gt,
                                  double threshold) {
    require_comparable(pred, gt);
    if (threshold <= 0.0 || threshold > 1.0) {
        throw std::invalid_argument("IoU threshold must lie in (0, 1]");
    }
    const std::vector<Segment> pred_segs = rle_segments(pred);
    const std::vector<Segment> gt_segs = rle_segments(gt);
    std::vector<bool> claimed(gt_segs.size(), false);

    MatchCounts counts;
    for (const Segment& p : pred_segs) {
        double best_iou = -1.0;
        std::size_t best = gt_segs.size();
        for (std::size_t g = 0; g < gt_segs.size(); ++g) {
            if (claimed[g] || gt_segs[g].label != p.label) {
                continue;
            }
            const double iou = segment_iou(p, gt_segs[g]);
            if (iou > best_iou) {
                best_iou = iou;
                best = g;
            }
        }
        if (best < gt_segs.size() && best_iou >= threshold) {
            claimed[best] = true;
            ++counts.tp;
        } else {
            ++counts.fp;
        }
    }
    for (bool hit : claimed) {
        if (!hit) {
            ++counts.fn;
        }
    }
    return counts;
}

PrfScores f1_at_iou(const LabelStream& pred, const LabelStream& gt, double threshold) {
    return prf_from_counts(count_segment_matches(pred, gt, threshold));
}

namespace {

std::int64_t levenshtein(const std::vector<ClassId>& a, const std::vector<ClassId>& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::int64_t> row(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        row[j] = static_cast<std::int64_t>(j);
    }
    for (std::size_t i = 1; i <= n; ++i) {
        std::int64_t diag = row[0];
        row[0] = static_cast<std::int64_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const std::int64_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[m];
}

std::vector<ClassId> segment_labels(const LabelStream& stream) {
    std::vector<ClassId> labels;
    for (const Segment& seg : rle_segments(stream)) {
        labels.push_back(seg.label);
    }
    return labels;
}

} // namespace

double edit_score(const LabelStream& pred, const LabelStream& gt) {
    const std::vector<ClassId> p = segment_labels(pred);
    const std::vector<ClassId> g = segment_labels(gt);
    if (p.empty() && g.empty()) {
        return 100.0;
    }
    const auto longest = static_cast<double>(std::max(p.size(), g.size()));
    return 100.0 * (1.0 - static_cast<double>(levenshtein(p, g)) / longest);
}

PerClassReport per_class_segment_prf(const LabelStream& pred, const LabelStream& gt) {
    require_comparable(pred, gt);
    const int num_classes = std::max(pred.num_classes(), gt.num_classes());
    std::vector<MatchCounts> counts(static_cast<std::size_t>(num_classes));
    std::vector<bool> appears(static_cast<std::size_t>(num_classes), false);

    for (const Segment& seg : rle_segments(gt)) {
        // Majority predicted frame label within the segment, ties to the
        // lowest class id.
        std::vector<std::int64_t> votes(static_cast<std::size_t>(num_classes), 0);
        for (FrameIndex f = seg.start; f <= seg.end; ++f) {
            ++votes[static_cast<std::size_t>(pred.labels[static_cast<std::size_t>(f)])];
        }
        ClassId voted = 0;
        for (ClassId c = 1; c < num_classes; ++c) {
            if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(voted)]) {
                voted = c;
            }
        }
        appears[static_cast<std::size_t>(seg.label)] = true;
        appears[static_cast<std::size_t>(voted)] = true;
        if (voted == seg.label) {
            ++counts[static_cast<std::size_t>(seg.label)].tp;
        } else {
            ++counts[static_cast<std::size_t>(seg.label)].fn;
            ++counts[static_cast<std::size_t>(voted)].fp;
        }
    }

    PerClassReport out;
    for (ClassId c = 0; c < num_classes; ++c) {
        if (!appears[static_cast<std::size_t>(c)]) {
            continue;
        }
        const MatchCounts& mc = counts[static_cast<std::size_t>(c)];
        PrfScores scores;
        const double tp = static_cast<double>(mc.tp);
        scores.precision = mc.tp + mc.fp > 0 ? tp / static_cast<double>(mc.tp + mc.fp) : 0.0;
        scores.recall = mc.tp + mc.fn > 0 ? tp / static_cast<double>(mc.tp + mc.fn) : 0.0;
        const double pr = scores.precision + scores.recall;
        scores.f1 = pr > 0.0 ? 2.0 * scores.precision * scores.recall / pr : 0.0;
        out.per_class.push_back({c, scores});
    }

    if (out.per_class.empty()) {
        out.mean = {1.0, 1.0, 1.0};
        out.min = {1.0, 1.0, 1.0};
        return out;
    }
    out.min = {1.0, 1.0, 1.0};
    for (const auto& entry : out.per_class) {
        out.mean.precision += entry.scores.precision;
        out.mean.recall += entry.scores.recall;
        out.mean.f1 += entry.scores.f1;
        out.min.precision = std::min(out.min.precision, entry.scores.precision);
        out.min.recall = std::min(out.min.recall, entry.scores.recall);
        out.min.f1 = std::min(out.min.f1, entry.scores.f1);
    }
    const auto k = static_cast<double>(out.per_class.size());
    out.mean.precision /= k;
    out.mean.recall /= k;
    out.mean.f1 /= k;
    return out;
}

MetricsReport report(const LabelStream& pred, const LabelStream& gt,
                     const std::vector<double>& thresholds) {
    MetricsReport rep;
    rep.acc = mof_accuracy(pred, gt);
    std::vector<double> sorted = thresholds;
    std::sort(sorted.begin(), sorted.end());
    for (double thr : sorted) {
        rep.f1_at.emplace_back(thr, f1_at_iou(pred, gt, thr));
    }
    rep.edit = edit_score(pred, gt);
    return rep;
}

MetricsAccumulator::MetricsAccumulator(std::vector<double> thresholds)
    : thresholds_(std::move(thresholds)) {
    std::sort(thresholds_.begin(), thresholds_.end());
    counts_.resize(thresholds_.size());
}

void MetricsAccumulator::add(const LabelStream& pred, const LabelStream& gt) {
    require_comparable(pred, gt);
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        const MatchCounts mc = count_segment_matches(pred, gt, thresholds_[i]);
        counts_[i].tp += mc.tp;
        counts_[i].fp += mc.fp;
        counts_[i].fn += mc.fn;
    }
    frames_ += gt.size();
    for (std::size_t t = 0; t < gt.labels.size(); ++t) {
        correct_ += pred.labels[t] == gt.labels[t] ? 1 : 0;
    }
    edit_sum_ += edit_score(pred, gt);
    ++sequences_;
}

MetricsReport MetricsAccumulator::report() const {
    MetricsReport rep;
    rep.acc = frames_ > 0 ? static_cast<double>(correct_) / static_cast<double>(frames_) : 1.0;
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        rep.f1_at.emplace_back(thresholds_[i], prf_from_counts(counts_[i]));
    }
    rep.edit = sequences_ > 0 ? edit_sum_ / static_cast<double>(sequences_) : 100.0;
    return rep;
}

} // namespace otalc
