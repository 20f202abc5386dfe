#pragma once

#include <utility>
#include <vector>

#include "otalc/baselines.hpp"
#include "otalc/core.hpp"

namespace otalc {

// Generative model for synthetic ground truth: per-class log-normal segment
// lengths and a Markov chain over class transitions (row-stochastic, zero
// diagonal so consecutive segments always differ).
struct GenModel {
    ClassMapPtr class_map;
    std::vector<std::pair<double, double>> length_log_params; // (mu_log, sigma_log) per class
    std::vector<std::vector<double>> transitions;

    // Uniform off-diagonal transitions and one shared length distribution.
    static GenModel uniform(ClassMapPtr class_map, double mu_log, double sigma_log);

    // Throws std::invalid_argument on a malformed model.
    void validate() const;
};

// Error modes layered onto a clean stream, applied in order: boundary jitter,
// per-segment blip insertion, per-frame substitution. A zero config is the
// identity. Stream length is always preserved.
struct NoiseConfig {
    double blip_rate = 0.0;        // probability a segment receives one blip
    int blip_len_max = 0;          // blip length drawn uniform from {1..max}
    int boundary_jitter_max = 0;   // each boundary shifts by uniform {-max..max}
    double sub_rate = 0.0;         // per-frame wrong-label substitution
    double softmax_epsilon = 0.1;  // mass spread off the corrupted label
};

// Markov segments with log-normal lengths (rounded, at least 1 frame),
// truncated to exactly total_frames.
LabelStream gen_ground_truth(const GenModel& model, FrameIndex total_frames, Rng& rng);

struct CorruptResult {
    LabelStream stream;
    std::vector<SoftmaxFrame> softmax; // filled only when requested
};

// Deterministic given (gt, noise, rng state). The optional softmax output
// puts 1 - epsilon on the corrupted label and epsilon/(C-1) elsewhere.
CorruptResult corrupt(const LabelStream& gt, const NoiseConfig& noise, Rng& rng,
                      bool with_softmax = false);

} // namespace otalc
