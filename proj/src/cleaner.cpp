#include "otalc/cleaner.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace otalc {

CleanerConfig::CleanerConfig(CutoffPolicy policy, int bridge, EmissionPolicy emission)
    : policy(std::move(policy)), bridge(bridge), emission(emission) {
    if (bridge < 1) {
        throw std::invalid_argument("bridging width b must be >= 1");
    }
    if (this->policy.is_static()) {
        if (bridge >= this->policy.static_c_min()) {
            throw std::invalid_argument(
                "bridging width b=" + std::to_string(bridge) +
                " must be < C_min=" + std::to_string(this->policy.static_c_min()));
        }
        return;
    }
    const auto& stats = this->policy.stats();
    if (!stats || stats->num_classes() == 0) {
        if (bridge >= this->policy.c_abs_min()) {
            throw std::invalid_argument(
                "bridging width b=" + std::to_string(bridge) +
                " must be < C_abs_min=" + std::to_string(this->policy.c_abs_min()));
        }
        return;
    }
    for (int c = 0; c < stats->num_classes(); ++c) {
        const int cutoff = this->policy.resolve(c);
        if (bridge >= cutoff) {
            throw std::invalid_argument("bridging width b=" + std::to_string(bridge) +
                                        " must be < cutoff " + std::to_string(cutoff) +
                                        " of class " + std::to_string(c));
        }
    }
}

Cleaner::Cleaner(CleanerConfig config, ClassMapPtr class_map, bool retain_history)
    : config_(std::move(config)), class_map_(std::move(class_map)), retain_(retain_history) {
    if (!class_map_) {
        throw std::invalid_argument("cleaner requires a class map");
    }
    // The config already checked the cutoffs it could see; re-check against
    // the actual vocabulary in case it is wider than the fitted stats.
    for (ClassId c = 0; c < class_map_->size(); ++c) {
        const int cutoff = config_.policy.resolve(c);
        if (config_.bridge >= cutoff) {
            throw std::invalid_argument("bridging width b=" + std::to_string(config_.bridge) +
                                        " must be < cutoff " + std::to_string(cutoff) +
                                        " of class " + class_map_->name(c));
        }
    }
    tracks_.resize(static_cast<std::size_t>(class_map_->size()));
}

void Cleaner::write_tidy(FrameIndex from, FrameIndex to, ClassId label) {
    if (!retain_) {
        return;
    }
    std::fill(tidy_.begin() + static_cast<std::ptrdiff_t>(from),
              tidy_.begin() + static_cast<std::ptrdiff_t>(to) + 1, label);
}

std::vector<CleanEvent> Cleaner::push(ClassId label) {
    if (label < 0 || label >= class_map_->size()) {
        throw std::invalid_argument("label " + std::to_string(label) +
                                    " outside vocabulary of " +
                                    std::to_string(class_map_->size()));
    }
    if (finalized_) {
        throw std::logic_error("push after finalize");
    }

    const FrameIndex t = next_frame_;
    LabelTrack& track = tracks_[static_cast<std::size_t>(label)];
    if (track.last_end >= 0 && t - track.last_end <= config_.bridge) {
        // Same run continues, or a short gap is bridged into the candidate.
        if (track.last_end != t - 1) {
            track.run_start = t;
        }
    } else {
        track.merged_start = t;
        track.run_start = t;
        track.before_merged = last_raw_;
    }
    track.last_end = t;

    std::vector<CleanEvent> events;
    ClassId out;
    if (t == 0) {
        // Frames connected to the stream start are trusted as-is.
        last_confirmed_ = label;
        out = label;
        events.push_back(CleanEvent::append(t, out));
    } else if (label == *last_confirmed_) {
        out = label;
        events.push_back(CleanEvent::append(t, out));
    } else {
        const FrameIndex full_length = t - track.merged_start + 1;
        const FrameIndex current_run = t - track.run_start + 1;
        const int cutoff = config_.policy.resolve(label);
        if (full_length >= cutoff && current_run >= config_.bridge) {
            events.push_back(CleanEvent::backdate(track.merged_start, t - 1, label));
            write_tidy(track.merged_start, t - 1, label);
            out = label;
            events.push_back(CleanEvent::append(t, out));
            last_confirmed_ = label;
        } else {
            out = config_.emission == EmissionPolicy::RawPrevious && track.before_merged >= 0
                      ? track.before_merged
                      : *last_confirmed_;
            events.push_back(CleanEvent::append(t, out));
        }
    }

    if (retain_) {
        raw_.push_back(label);
        tidy_.push_back(out);
    }
    last_raw_ = label;
    ++next_frame_;
    return events;
}

std::vector<CleanEvent> Cleaner::finalize(FinalizePolicy policy) {
    std::vector<CleanEvent> events;
    if (finalized_) {
        return events;
    }
    finalized_ = true;
    if (policy == FinalizePolicy::ConfirmTrailing && next_frame_ > 0 &&
        last_raw_ != *last_confirmed_) {
        const LabelTrack& track = tracks_[static_cast<std::size_t>(last_raw_)];
        events.push_back(CleanEvent::backdate(track.merged_start, next_frame_ - 1, last_raw_));
        write_tidy(track.merged_start, next_frame_ - 1, last_raw_);
        last_confirmed_ = last_raw_;
    }
    return events;
}

LabelStream Cleaner::tidy_snapshot() const {
    if (!retain_ && next_frame_ > 0) {
        throw std::logic_error("tidy_snapshot requires retain_history");
    }
    return LabelStream{tidy_, class_map_};
}

std::optional<CandidateView> Cleaner::candidate() const {
    if (next_frame_ == 0 || last_raw_ == *last_confirmed_) {
        return std::nullopt;
    }
    const LabelTrack& track = tracks_[static_cast<std::size_t>(last_raw_)];
    const FrameIndex t = next_frame_ - 1;
    return CandidateView{last_raw_, track.merged_start, t - track.run_start + 1,
                         t - track.merged_start + 1};
}

namespace {

// Start of the maximal contiguous run of `label` ending at `pos`.
FrameIndex run_start_at(const std::vector<ClassId>& raw, FrameIndex pos, ClassId label) {
    while (pos > 0 && raw[static_cast<std::size_t>(pos - 1)] == label) {
        --pos;
    }
    return pos;
}

// Merged candidate start for `label` ending at frame t: walk backwards from
// the current run, jumping across any gap in which the label reoccurs within
// b frames of a run start.
FrameIndex merged_start_at(const std::vector<ClassId>& raw, FrameIndex t, ClassId label,
                           int bridge) {
    FrameIndex start = run_start_at(raw, t, label);
    while (start > 0) {
        const FrameIndex lo = std::max<FrameIndex>(0, start - bridge);
        FrameIndex earlier = -1;
        for (FrameIndex f = lo; f < start; ++f) {
            if (raw[static_cast<std::size_t>(f)] == label) {
                earlier = f;
                break;
            }
        }
        if (earlier < 0) {
            break;
        }
        start = run_start_at(raw, earlier, label);
    }
    return start;
}

} // namespace

LabelStream reference_clean(const LabelStream& raw, const CleanerConfig& config,
                            FinalizePolicy policy) {
    if (auto fault = validate_stream(raw)) {
        throw std::invalid_argument(fault->message);
    }
    const std::vector<ClassId>& in = raw.labels;
    std::vector<ClassId> tidy;
    tidy.reserve(in.size());
    ClassId confirmed = -1;

    for (FrameIndex t = 0; t < raw.size(); ++t) {
        const ClassId y = in[static_cast<std::size_t>(t)];
        if (t == 0) {
            confirmed = y;
            tidy.push_back(y);
            continue;
        }
        if (y == confirmed) {
            tidy.push_back(y);
            continue;
        }
        const FrameIndex run_start = run_start_at(in, t, y);
        const FrameIndex start = merged_start_at(in, t, y, config.bridge);
        const FrameIndex full_length = t - start + 1;
        const FrameIndex current_run = t - run_start + 1;
        if (full_length >= config.policy.resolve(y) && current_run >= config.bridge) {
            std::fill(tidy.begin() + static_cast<std::ptrdiff_t>(start), tidy.end(), y);
            tidy.push_back(y);
            confirmed = y;
        } else if (config.emission == EmissionPolicy::RawPrevious && start > 0) {
            tidy.push_back(in[static_cast<std::size_t>(start - 1)]);
        } else {
            tidy.push_back(confirmed);
        }
    }

    if (policy == FinalizePolicy::ConfirmTrailing && !in.empty() && in.back() != confirmed) {
        const ClassId y = in.back();
        const FrameIndex start = merged_start_at(in, raw.size() - 1, y, config.bridge);
        std::fill(tidy.begin() + static_cast<std::ptrdiff_t>(start), tidy.end(), y);
    }

    return LabelStream{std::move(tidy), raw.class_map};
}

} // namespace otalc
