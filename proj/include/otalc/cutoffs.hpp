#pragma once

#include <memory>
#include <string>
#include <vector>

#include "otalc/core.hpp"

namespace otalc {

// Log-normal fit of one class's ground-truth segment lengths. mu_log/sigma_log
// are the mean and sample std (n-1 denominator) of the natural-log lengths;
// the frame-space moments follow from the closed forms below.
struct ClassStats {
    std::int64_t count = 0;
    double mu_log = 0.0;
    double sigma_log = 0.0;

    bool absent() const { return count == 0; }
    // exp(mu + sigma^2 / 2)
    double mu_frames() const;
    // sqrt((exp(sigma^2) - 1) * exp(2*mu + sigma^2))
    double sigma_frames() const;
};

struct ClassLengthStats {
    std::vector<ClassStats> classes; // indexed by class id

    int num_classes() const { return static_cast<int>(classes.size()); }

    // {"classes":[{"id":..,"count":..,"mu_log":..,"sigma_log":..}]}
    // Frame-space moments are recomputed on load, never stored.
    std::string to_json() const;
    static ClassLengthStats from_json(const std::string& text);
};

// Pool ground-truth segment lengths per class across streams and fit the
// log-normal parameters. Streams must share one vocabulary; classes with no
// observed segment are flagged absent. Single-observation classes get
// sigma_log = 0.
ClassLengthStats fit_class_stats(const std::vector<LabelStream>& gt_streams);

// Which statistics feed the per-class cutoff formula mu - kappa*sigma.
// FrameMoments (default) uses the log-normal's frame-space mean/std;
// LogMoments maps exp(mu_log - kappa*sigma_log) back to frames.
enum class CutoffSpace {
    FrameMoments,
    LogMoments,
};

// Per-class minimum length: max(c_abs_min, round(mu - kappa*sigma)), rounded
// half-up to integer frames. Absent classes fall back to c_abs_min.
int class_cutoff(const ClassLengthStats& stats, ClassId cls, double kappa, int c_abs_min,
                 CutoffSpace space = CutoffSpace::FrameMoments);

// Minimum-segment cutoff resolution: a single class-agnostic value, or
// per-class values derived from fitted length statistics. Immutable after
// construction; class-based cutoffs are precomputed per class.
class CutoffPolicy {
public:
    static CutoffPolicy static_cutoff(int c_min);
    static CutoffPolicy class_based(double kappa, int c_abs_min,
                                    std::shared_ptr<const ClassLengthStats> stats,
                                    CutoffSpace space = CutoffSpace::FrameMoments);

    int resolve(ClassId cls) const;
    // Smallest cutoff any in-vocabulary class can resolve to.
    int min_cutoff() const;

    bool is_static() const { return static_; }
    int static_c_min() const { return c_min_; }
    double kappa() const { return kappa_; }
    int c_abs_min() const { return c_abs_min_; }
    const std::shared_ptr<const ClassLengthStats>& stats() const { return stats_; }

private:
    CutoffPolicy() = default;

    bool static_ = true;
    int c_min_ = 1;
    double kappa_ = 0.0;
    int c_abs_min_ = 1;
    std::shared_ptr<const ClassLengthStats> stats_;
    std::vector<int> table_; // memoized per-class cutoffs (class-based only)
};

} // namespace otalc
