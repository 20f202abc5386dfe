#pragma once

#include <vector>

#include "otalc/core.hpp"

namespace otalc {

// One frame of per-class probabilities. Must have exactly C entries, all
// non-negative, summing to 1 within 1e-6.
struct SoftmaxFrame {
    std::vector<double> probs;

    int num_classes() const { return static_cast<int>(probs.size()); }
    // Throws std::invalid_argument on the wrong length or a bad distribution.
    void validate(int num_classes) const;
};

// Exponential smoothing of softmax frames: state := alpha*state + (1-alpha)*p.
// The first frame initializes the state. Returns the argmax per frame, ties
// broken by lowest class id.
class RecursiveAverager {
public:
    RecursiveAverager(int num_classes, double alpha);

    ClassId push(const SoftmaxFrame& frame);
    const std::vector<double>& state() const { return state_; }

private:
    double alpha_;
    bool primed_ = false;
    std::vector<double> state_;
};

// Sliding-window mode over the last w raw labels, ties broken by the most
// recent occurrence. w = 1 is the identity smoother.
class ModalSmoother {
public:
    ModalSmoother(int num_classes, int window);

    ClassId push(ClassId label);

private:
    int num_classes_;
    std::size_t window_;
    std::vector<ClassId> history_; // ring buffer, oldest at head_
    std::size_t head_ = 0;
    std::int64_t pushed_ = 0;
};

} // namespace otalc
