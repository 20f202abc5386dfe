#include "otalc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otalc {

GenModel GenModel::uniform(ClassMapPtr class_map, double mu_log, double sigma_log) {
    GenModel model;
    model.class_map = std::move(class_map);
    const int c = model.class_map ? model.class_map->size() : 0;
    model.length_log_params.assign(static_cast<std::size_t>(c), {mu_log, sigma_log});
    model.transitions.assign(static_cast<std::size_t>(c),
                             std::vector<double>(static_cast<std::size_t>(c), 0.0));
    if (c > 1) {
        const double p = 1.0 / static_cast<double>(c - 1);
        for (int i = 0; i < c; ++i) {
            for (int j = 0; j < c; ++j) {
                if (i != j) {
                    model.transitions[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
                }
            }
        }
    }
    return model;
}

void GenModel::validate() const {
    if (!class_map || class_map->size() == 0) {
        throw std::invalid_argument("generative model requires a non-empty vocabulary");
    }
    const auto c = static_cast<std::size_t>(class_map->size());
    if (length_log_params.size() != c) {
        throw std::invalid_argument("length distribution count does not match vocabulary");
    }
    for (const auto& [mu, sigma] : length_log_params) {
        (void)mu;
        if (sigma < 0.0) {
            throw std::invalid_argument("sigma_log must be >= 0");
        }
    }
    if (c == 1) {
        return; // transitions never sampled for a single class
    }
    if (transitions.size() != c) {
        throw std::invalid_argument("transition matrix must be CxC");
    }
    for (std::size_t i = 0; i < c; ++i) {
        if (transitions[i].size() != c) {
            throw std::invalid_argument("transition matrix must be CxC");
        }
        if (transitions[i][i] != 0.0) {
            throw std::invalid_argument("transition matrix diagonal must be zero");
        }
        double sum = 0.0;
        for (double p : transitions[i]) {
            if (p < 0.0) {
                throw std::invalid_argument("transition probabilities must be >= 0");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument("transition matrix row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum));
        }
    }
}

namespace {

FrameIndex draw_length(const std::pair<double, double>& log_params, Rng& rng) {
    std::lognormal_distribution<double> dist(log_params.first, log_params.second);
    return std::max<FrameIndex>(1, static_cast<FrameIndex>(std::llround(dist(rng))));
}

} // namespace

LabelStream gen_ground_truth(const GenModel& model, FrameIndex total_frames, Rng& rng) {
    model.validate();
    LabelStream stream;
    stream.class_map = model.class_map;
    if (total_frames <= 0) {
        return stream;
    }
    stream.labels.reserve(static_cast<std::size_t>(total_frames));

    const int c = model.class_map->size();
    std::uniform_int_distribution<ClassId> initial(0, c - 1);
    ClassId current = initial(rng);
    while (stream.size() < total_frames) {
        const FrameIndex len =
            std::min<FrameIndex>(draw_length(model.length_log_params[static_cast<std::size_t>(current)], rng),
                                 total_frames - stream.size());
        stream.labels.insert(stream.labels.end(), static_cast<std::size_t>(len), current);
        if (c > 1) {
            const auto& row = model.transitions[static_cast<std::size_t>(current)];
            std::discrete_distribution<ClassId> next(row.begin(), row.end());
            current = next(rng);
        }
    }
    return stream;
}

namespace {

ClassId draw_other_label(ClassId avoid, int num_classes, Rng& rng) {
    std::uniform_int_distribution<ClassId> dist(0, num_classes - 2);
    ClassId drawn = dist(rng);
    if (drawn >= avoid) {
        ++drawn;
    }
    return drawn;
}

std::vector<ClassId> apply_boundary_jitter(const LabelStream& gt, int jitter_max, Rng& rng) {
    const std::vector<Segment> segs = rle_segments(gt);
    std::vector<ClassId> out(gt.labels.size());
    std::uniform_int_distribution<FrameIndex> shift(-jitter_max, jitter_max);
    // Shift each internal boundary, keeping boundaries ordered; a segment
    // squeezed to nothing simply vanishes.
    std::vector<FrameIndex> starts(segs.size());
    starts[0] = 0;
    for (std::size_t i = 1; i < segs.size(); ++i) {
        const FrameIndex moved = segs[i].start + shift(rng);
        starts[i] = std::clamp<FrameIndex>(moved, starts[i - 1], gt.size());
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const FrameIndex end = i + 1 < segs.size() ? starts[i + 1] : gt.size();
        for (FrameIndex f = starts[i]; f < end; ++f) {
            out[static_cast<std::size_t>(f)] = segs[i].label;
        }
    }
    return out;
}

} // namespace

CorruptResult corrupt(const LabelStream& gt, const NoiseConfig& noise, Rng& rng,
                      bool with_softmax) {
    CorruptResult result;
    result.stream.class_map = gt.class_map;
    result.stream.labels = gt.labels;
    const int c = gt.num_classes();

    if (!gt.empty()) {
        if (noise.boundary_jitter_max > 0) {
            result.stream.labels = apply_boundary_jitter(gt, noise.boundary_jitter_max, rng);
        }

        if (noise.blip_rate > 0.0 && noise.blip_len_max > 0 && c > 1) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            std::uniform_int_distribution<int> blip_len(1, noise.blip_len_max);
            // Blips are placed strictly inside a segment so they always split
            // it; segments too short to host one are left alone.
            for (const Segment& seg : rle_segments(result.stream)) {
                if (coin(rng) >= noise.blip_rate) {
                    continue;
                }
                const FrameIndex len = blip_len(rng);
                if (seg.length() < len + 2) {
                    continue;
                }
                std::uniform_int_distribution<FrameIndex> pos(seg.start + 1, seg.end - len);
                const FrameIndex at = pos(rng);
                const ClassId wrong = draw_other_label(seg.label, c, rng);
                for (FrameIndex f = at; f < at + len; ++f) {
                    result.stream.labels[static_cast<std::size_t>(f)] = wrong;
                }
            }
        }

        if (noise.sub_rate > 0.0 && c > 1) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            for (auto& label : result.stream.labels) {
                if (coin(rng) < noise.sub_rate) {
                    label = draw_other_label(label, c, rng);
                }
            }
        }
    }

    if (with_softmax) {
        if (c < 1) {
            throw std::invalid_argument("softmax output requires a non-empty vocabulary");
        }
        const double eps = c > 1 ? noise.softmax_epsilon : 0.0;
        const double off = c > 1 ? eps / static_cast<double>(c - 1) : 0.0;
        result.softmax.reserve(result.stream.labels.size());
        for (ClassId label : result.stream.labels) {
            SoftmaxFrame frame;
            frame.probs.assign(static_cast<std::size_t>(c), off);
            frame.probs[static_cast<std::size_t>(label)] = 1.0 - eps;
            result.softmax.push_back(std::move(frame));
        }
    }
    return result;
}

} // namespace otalc
