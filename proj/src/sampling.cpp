#include "otalc/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace otalc {
namespace {

FrameIndex uniform_in(FrameIndex lo, FrameIndex hi, Rng& rng) {
    std::uniform_int_distribution<FrameIndex> dist(lo, hi);
    return dist(rng);
}

} // namespace

ClipSpec::ClipSpec(int frames_per_clip, int stride)
    : frames_per_clip(frames_per_clip), stride(stride) {
    if (frames_per_clip < 1 || stride < 1) {
        throw std::invalid_argument("clip spec requires T >= 1 and tau >= 1");
    }
}

FrameIndex dense_train_start(const Segment& seg, const ClipSpec& spec, Rng& rng) {
    if (seg.end - seg.start > spec.span()) {
        return uniform_in(seg.start, seg.end - spec.span(), rng);
    }
    return seg.start;
}

FrameIndex surround_train_start(const Segment& seg, const ClipSpec& spec, Rng& rng) {
    const FrameIndex offset = spec.half_span();
    const FrameIndex raw = uniform_in(seg.start - offset, seg.end - offset, rng);
    return std::max<FrameIndex>(raw, 0);
}

std::vector<FrameIndex> clip_indices(FrameIndex start, const ClipSpec& spec,
                                     BoundaryPolicy policy, FrameIndex video_len) {
    if (video_len < 1) {
        throw std::invalid_argument("clip_indices requires video_len >= 1");
    }
    std::vector<FrameIndex> indices;
    indices.reserve(static_cast<std::size_t>(spec.frames_per_clip));
    for (int k = 0; k < spec.frames_per_clip; ++k) {
        FrameIndex idx = start + static_cast<FrameIndex>(k) * spec.stride;
        switch (policy) {
        case BoundaryPolicy::ClampRepeat:
            idx = std::clamp<FrameIndex>(idx, 0, video_len - 1);
            break;
        case BoundaryPolicy::Wrap:
            idx = ((idx % video_len) + video_len) % video_len;
            break;
        }
        indices.push_back(idx);
    }
    return indices;
}

std::vector<FrameIndex> inference_clip_indices(FrameIndex t, const ClipSpec& spec,
                                               InferenceAlignment alignment) {
    const FrameIndex first = alignment == InferenceAlignment::ExcludeCurrent
                                 ? t - spec.span()
                                 : t - spec.span() + spec.stride;
    std::vector<FrameIndex> indices;
    indices.reserve(static_cast<std::size_t>(spec.frames_per_clip));
    for (int k = 0; k < spec.frames_per_clip; ++k) {
        indices.push_back(std::max<FrameIndex>(first + static_cast<FrameIndex>(k) * spec.stride, 0));
    }
    return indices;
}

} // namespace otalc
