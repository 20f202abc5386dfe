#include "otalc/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otalc {

void SoftmaxFrame::validate(int num_classes) const {
    if (num_classes != static_cast<int>(probs.size())) {
        throw std::invalid_argument("softmax frame has " + std::to_string(probs.size()) +
                                    " entries, expected " + std::to_string(num_classes));
    }
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) {
            throw std::invalid_argument("softmax frame has a negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw std::invalid_argument("softmax frame sums to " + std::to_string(sum) +
                                    ", expected 1");
    }
}

namespace {

ClassId lowest_argmax(const std::vector<double>& values) {
    ClassId best = 0;
    for (ClassId c = 1; c < static_cast<ClassId>(values.size()); ++c) {
        if (values[static_cast<std::size_t>(c)] > values[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

} // namespace

RecursiveAverager::RecursiveAverager(int num_classes, double alpha) : alpha_(alpha) {
    if (num_classes < 1) {
        throw std::invalid_argument("recursive averager requires at least one class");
    }
    if (alpha < 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("alpha must lie in [0, 1)");
    }
    state_.resize(static_cast<std::size_t>(num_classes), 0.0);
}

ClassId RecursiveAverager::push(const SoftmaxFrame& frame) {
    frame.validate(static_cast<int>(state_.size()));
    if (!primed_) {
        state_ = frame.probs;
        primed_ = true;
    } else {
        for (std::size_t c = 0; c < state_.size(); ++c) {
            state_[c] = alpha_ * state_[c] + (1.0 - alpha_) * frame.probs[c];
        }
    }
    return lowest_argmax(state_);
}

ModalSmoother::ModalSmoother(int num_classes, int window)
    : num_classes_(num_classes), window_(static_cast<std::size_t>(window)) {
    if (num_classes < 1) {
        throw std::invalid_argument("modal smoother requires at least one class");
    }
    if (window < 1) {
        throw std::invalid_argument("window must be >= 1");
    }
    history_.reserve(window_);
}

ClassId ModalSmoother::push(ClassId label) {
    if (label < 0 || label >= num_classes_) {
        throw std::invalid_argument("label " + std::to_string(label) +
                                    " outside vocabulary of " + std::to_string(num_classes_));
    }
    if (history_.size() < window_) {
        history_.push_back(label);
    } else {
        history_[head_] = label;
        head_ = (head_ + 1) % window_;
    }
    ++pushed_;

    // Mode over the window; on a count tie the label seen most recently wins.
    std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes_), 0);
    std::vector<std::int64_t> last_seen(static_cast<std::size_t>(num_classes_), -1);
    const std::size_t filled = history_.size();
    for (std::size_t i = 0; i < filled; ++i) {
        // Age 0 is the oldest element of the window.
        const std::size_t slot = (head_ + i) % filled;
        const auto cls = static_cast<std::size_t>(history_[slot]);
        ++counts[cls];
        last_seen[cls] = static_cast<std::int64_t>(i);
    }
    ClassId best = history_[(head_ + filled - 1) % filled];
    for (ClassId c = 0; c < num_classes_; ++c) {
        const auto cc = static_cast<std::size_t>(c);
        const auto bb = static_cast<std::size_t>(best);
        if (counts[cc] > counts[bb] ||
            (counts[cc] == counts[bb] && last_seen[cc] > last_seen[bb])) {
            best = c;
        }
    }
    return best;
}

} // namespace otalc
