#pragma once

#include <optional>
#include <vector>

#include "otalc/core.hpp"
#include "otalc/cutoffs.hpp"

namespace otalc {

// Label emitted while a candidate segment is still below its cutoff.
// LastConfirmed keeps the tidy stream to confirmed labels only;
// RawPrevious reproduces the literal "previous raw segment" emission, which
// can surface a label that was itself never confirmed.
enum class EmissionPolicy {
    LastConfirmed,
    RawPrevious,
};

// End-of-stream handling: leave the causal output as emitted, or promote a
// still-pending candidate with a final backdate.
enum class FinalizePolicy {
    DiscardUnconfirmed,
    ConfirmTrailing,
};

// Cleaning parameters: the cutoff policy and the bridging width b. A gap of
// fewer than b frames between two runs of the same label is merged into one
// candidate segment. Requires b >= 1 and b < cutoff for every class.
struct CleanerConfig {
    CutoffPolicy policy;
    int bridge = 1; // b
    EmissionPolicy emission = EmissionPolicy::LastConfirmed;

    CleanerConfig(CutoffPolicy policy, int bridge,
                  EmissionPolicy emission = EmissionPolicy::LastConfirmed);
};

// One revision-aware output step. Append writes frame t; Backdate rewrites
// the contiguous range [from, to] with a just-confirmed label.
struct CleanEvent {
    enum class Kind { Append, Backdate };

    Kind kind = Kind::Append;
    FrameIndex from = 0;
    FrameIndex to = 0;
    ClassId label = 0;

    static CleanEvent append(FrameIndex t, ClassId label) {
        return {Kind::Append, t, t, label};
    }
    static CleanEvent backdate(FrameIndex from, FrameIndex to, ClassId label) {
        return {Kind::Backdate, from, to, label};
    }
    bool operator==(const CleanEvent&) const = default;
};

// The candidate segment tracked for the most recent unconfirmed label.
struct CandidateView {
    ClassId label = 0;
    FrameIndex start = 0;       // merged segment start
    FrameIndex current_run = 0; // contiguous run ending at the last frame
    FrameIndex full_length = 0; // merged span including bridged gaps
};

// Streaming label cleaner. Consumes one raw per-frame prediction at a time
// and emits tidy predictions with explicit revision events, in real time.
//
// A new label is withheld until its candidate segment (the contiguous run
// plus any earlier runs of the same label reachable through gaps of fewer
// than b frames) reaches the class cutoff while the current run is at least
// b frames. Confirmation backdates the whole candidate span. The first raw
// prediction of a stream is confirmed immediately.
//
// Work is amortized O(1) per push. One cleaner serves exactly one stream;
// construct with retain_history = false for bounded-memory operation (events
// only, no snapshots).
class Cleaner {
public:
    Cleaner(CleanerConfig config, ClassMapPtr class_map, bool retain_history = true);

    // Feed the raw prediction for the next frame. Throws std::invalid_argument
    // on an out-of-vocabulary label, leaving the state unchanged.
    std::vector<CleanEvent> push(ClassId label);

    // Terminal; at most one call emits events.
    std::vector<CleanEvent> finalize(FinalizePolicy policy = FinalizePolicy::DiscardUnconfirmed);

    // Current tidy stream; requires retain_history.
    LabelStream tidy_snapshot() const;

    FrameIndex frames_pushed() const { return next_frame_; }
    std::optional<ClassId> last_confirmed() const { return last_confirmed_; }
    std::optional<CandidateView> candidate() const;
    const std::vector<ClassId>& raw_history() const { return raw_; }
    const std::vector<ClassId>& tidy_history() const { return tidy_; }
    const CleanerConfig& config() const { return config_; }

private:
    // Per-label memo of the most recent occurrence run and the merged start
    // reachable from it. Stale entries (last_end more than b frames back) are
    // ignored on access, so no purging is needed and memory stays O(C).
    struct LabelTrack {
        FrameIndex merged_start = 0;
        FrameIndex run_start = 0;
        FrameIndex last_end = -1; // -1: never seen
        ClassId before_merged = -1;
    };

    void write_tidy(FrameIndex from, FrameIndex to, ClassId label);

    CleanerConfig config_;
    ClassMapPtr class_map_;
    bool retain_;
    std::vector<LabelTrack> tracks_;
    FrameIndex next_frame_ = 0;
    ClassId last_raw_ = -1;
    std::optional<ClassId> last_confirmed_;
    bool finalized_ = false;
    std::vector<ClassId> raw_;
    std::vector<ClassId> tidy_;
};

// Recomputes the tidy stream from scratch with a per-frame backward scan over
// the raw history: the quadratic oracle the streaming engine is checked
// against. Both implement the same confirmation semantics; they must agree
// frame-exactly on every input.
LabelStream reference_clean(const LabelStream& raw, const CleanerConfig& config,
                            FinalizePolicy policy = FinalizePolicy::DiscardUnconfirmed);

} // namespace otalc
