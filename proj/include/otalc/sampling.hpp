#pragma once

#include <vector>

#include "otalc/core.hpp"

namespace otalc {

// Clip geometry: T frames taken at a stride of tau, spanning T*tau raw frames.
struct ClipSpec {
    int frames_per_clip = 1; // T
    int stride = 1;          // tau

    ClipSpec(int frames_per_clip, int stride);
    FrameIndex span() const {
        return static_cast<FrameIndex>(frames_per_clip) * static_cast<FrameIndex>(stride);
    }
    // floor(T*tau / 2); exact half for the even spans used in practice.
    FrameIndex half_span() const { return span() / 2; }
};

// Repair rule for clip indices that fall outside [0, video_len-1].
enum class BoundaryPolicy {
    ClampRepeat, // clamp into range, repeating the first/last frame
    Wrap,        // modular wrap-around
};

// Whether an online clip for frame t ends at t - tau (strictly past frames)
// or at t itself. ExcludeCurrent is the default reading of "initial frame at
// -T*tau"; IncludeCurrent is the off-by-one alternative.
enum class InferenceAlignment {
    ExcludeCurrent,
    IncludeCurrent,
};

// Training-time start for dense sampling: uniform over {N_s .. N_e - T*tau}
// when the segment is strictly longer than the clip span, else N_s.
FrameIndex dense_train_start(const Segment& seg, const ClipSpec& spec, Rng& rng);

// Training-time start for surround sampling: uniform over
// {N_s - T*tau/2 .. N_e - T*tau/2}, clamped below at 0 after the draw.
FrameIndex surround_train_start(const Segment& seg, const ClipSpec& spec, Rng& rng);

// The T frame indices start + k*tau, each repaired per the boundary policy.
std::vector<FrameIndex> clip_indices(FrameIndex start, const ClipSpec& spec,
                                     BoundaryPolicy policy, FrameIndex video_len);

// Causal sliding-window clip for the current frame t: indices
// t - T*tau + k*tau (ExcludeCurrent), clamped below at 0. Never emits an
// index greater than t.
std::vector<FrameIndex> inference_clip_indices(
    FrameIndex t, const ClipSpec& spec,
    InferenceAlignment alignment = InferenceAlignment::ExcludeCurrent);

} // namespace otalc
