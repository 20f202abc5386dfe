#include "otalc/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace otalc {

double ClassStats::mu_frames() const {
    return std::exp(mu_log + sigma_log * sigma_log / 2.0);
}

double ClassStats::sigma_frames() const {
    const double s2 = sigma_log * sigma_log;
    return std::sqrt((std::exp(s2) - 1.0) * std::exp(2.0 * mu_log + s2));
}

std::string ClassLengthStats::to_json() const {
    nlohmann::json doc;
    doc["classes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const ClassStats& cs = classes[i];
        doc["classes"].push_back({{"id", i},
                                  {"count", cs.count},
                                  {"mu_log", cs.mu_log},
                                  {"sigma_log", cs.sigma_log}});
    }
    return doc.dump(2);
}

ClassLengthStats ClassLengthStats::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.contains("classes") || !doc["classes"].is_array()) {
        throw std::invalid_argument("stats document missing \"classes\" array");
    }
    ClassLengthStats stats;
    stats.classes.resize(doc["classes"].size());
    for (const auto& entry : doc["classes"]) {
        const auto id = entry.at("id").get<std::int64_t>();
        if (id < 0 || static_cast<std::size_t>(id) >= stats.classes.size()) {
            throw std::invalid_argument("stats class ids must be dense from 0");
        }
        ClassStats& cs = stats.classes[static_cast<std::size_t>(id)];
        cs.count = entry.at("count").get<std::int64_t>();
        cs.mu_log = entry.at("mu_log").get<double>();
        cs.sigma_log = entry.at("sigma_log").get<double>();
    }
    return stats;
}

ClassLengthStats fit_class_stats(const std::vector<LabelStream>& gt_streams) {
    ClassLengthStats stats;
    if (gt_streams.empty()) {
        return stats;
    }
    const ClassMapPtr& map = gt_streams.front().class_map;
    for (const LabelStream& stream : gt_streams) {
        if (map && stream.class_map && !(*map == *stream.class_map)) {
            throw std::invalid_argument("fit_class_stats streams must share one vocabulary");
        }
        if (auto fault = validate_stream(stream)) {
            throw std::invalid_argument(fault->message);
        }
    }

    const int num_classes = gt_streams.front().num_classes();
    std::vector<std::vector<double>> log_lengths(static_cast<std::size_t>(num_classes));
    for (const LabelStream& stream : gt_streams) {
        for (const Segment& seg : rle_segments(stream)) {
            log_lengths[static_cast<std::size_t>(seg.label)].push_back(
                std::log(static_cast<double>(seg.length())));
        }
    }

    stats.classes.resize(static_cast<std::size_t>(num_classes));
    for (std::size_t c = 0; c < log_lengths.size(); ++c) {
        const auto& logs = log_lengths[c];
        ClassStats& cs = stats.classes[c];
        cs.count = static_cast<std::int64_t>(logs.size());
        if (logs.empty()) {
            continue;
        }
        double sum = 0.0;
        for (double v : logs) {
            sum += v;
        }
        cs.mu_log = sum / static_cast<double>(logs.size());
        if (logs.size() > 1) {
            double sq = 0.0;
            for (double v : logs) {
                sq += (v - cs.mu_log) * (v - cs.mu_log);
            }
            cs.sigma_log = std::sqrt(sq / static_cast<double>(logs.size() - 1));
        }
    }
    return stats;
}

namespace {

int round_half_up(double x) {
    return static_cast<int>(std::floor(x + 0.5));
}

} // namespace

int class_cutoff(const ClassLengthStats& stats, ClassId cls, double kappa, int c_abs_min,
                 CutoffSpace space) {
    if (cls < 0 || cls >= stats.num_classes() ||
        stats.classes[static_cast<std::size_t>(cls)].absent()) {
        return c_abs_min;
    }
    const ClassStats& cs = stats.classes[static_cast<std::size_t>(cls)];
    double raw = 0.0;
    switch (space) {
    case CutoffSpace::FrameMoments:
        raw = cs.mu_frames() - kappa * cs.sigma_frames();
        break;
    case CutoffSpace::LogMoments:
        raw = std::exp(cs.mu_log - kappa * cs.sigma_log);
        break;
    }
    return std::max(c_abs_min, round_half_up(raw));
}

CutoffPolicy CutoffPolicy::static_cutoff(int c_min) {
    if (c_min < 1) {
        throw std::invalid_argument("static cutoff requires C_min >= 1");
    }
    CutoffPolicy policy;
    policy.static_ = true;
    policy.c_min_ = c_min;
    return policy;
}

CutoffPolicy CutoffPolicy::class_based(double kappa, int c_abs_min,
                                       std::shared_ptr<const ClassLengthStats> stats,
                                       CutoffSpace space) {
    if (kappa < 0.0) {
        throw std::invalid_argument("class-based cutoff requires kappa >= 0");
    }
    if (c_abs_min < 1) {
        throw std::invalid_argument("class-based cutoff requires C_abs_min >= 1");
    }
    if (!stats) {
        throw std::invalid_argument("class-based cutoff requires fitted stats");
    }
    CutoffPolicy policy;
    policy.static_ = false;
    policy.kappa_ = kappa;
    policy.c_abs_min_ = c_abs_min;
    policy.stats_ = std::move(stats);
    policy.table_.reserve(static_cast<std::size_t>(policy.stats_->num_classes()));
    for (int c = 0; c < policy.stats_->num_classes(); ++c) {
        policy.table_.push_back(class_cutoff(*policy.stats_, c, kappa, c_abs_min, space));
    }
    return policy;
}

int CutoffPolicy::resolve(ClassId cls) const {
    if (static_) {
        return c_min_;
    }
    if (cls < 0 || static_cast<std::size_t>(cls) >= table_.size()) {
        return c_abs_min_;
    }
    return table_[static_cast<std::size_t>(cls)];
}

int CutoffPolicy::min_cutoff() const {
    if (static_) {
        return c_min_;
    }
    // Over in-vocabulary classes only; absent ones already resolve to
    // c_abs_min via their table entry. Bare c_abs_min applies only when no
    // class is known at all.
    if (table_.empty()) {
        return c_abs_min_;
    }
    int lowest = table_.front();
    for (int cutoff : table_) {
        lowest = std::min(lowest, cutoff);
    }
    return lowest;
}

} // namespace otalc
