#pragma once

#include <memory>
#include <string>
#include <vector>

#include "otalc/cleaner.hpp"
#include "otalc/core.hpp"
#include "otalc/metrics.hpp"

namespace otalc {

// What the grid search maximizes. MeanF1PlusEdit averages the mean of the
// three standard F1 columns (scaled to [0, 100]) with the edit score.
struct Objective {
    enum class Kind { F1At, Edit, Acc, MeanF1PlusEdit };

    Kind kind = Kind::F1At;
    double threshold = 0.5;

    // "f1@0.5", "edit", "acc", "mean_f1_plus_edit"
    static Objective parse(const std::string& text);
    std::string to_string() const;
    double value(const MetricsReport& rep) const;
};

// Hyper-parameter grid: static configs are static_c_min x static_b, class
// based configs are kappa x c_abs_min x class_b. Combinations violating
// b < cutoff are skipped, not errored.
struct GridSpec {
    std::vector<int> static_c_min;
    std::vector<int> static_b;
    std::vector<double> kappa;
    std::vector<int> c_abs_min;
    std::vector<int> class_b;
    Objective objective;

    static GridSpec from_json(const std::string& text);
    std::string to_json() const;
};

struct GridRow {
    bool class_based = false;
    int c_min = 0;      // static rows
    double kappa = 0.0; // class-based rows
    int c_abs_min = 0;  // class-based rows
    int b = 0;
    MetricsReport metrics;
    double objective_value = 0.0;

    std::string params_csv() const; // "policy,c_min,kappa,c_abs_min,b"
};

struct GridSearchResult {
    GridRow best;
    std::vector<GridRow> table; // sorted by objective, best first
    std::vector<double> thresholds;

    CleanerConfig best_config(std::shared_ptr<const ClassLengthStats> stats) const;
    std::string table_csv() const;
};

// Cleans every raw stream under every valid grid point and scores it against
// the paired ground truth (pooled across sequences). Ties break toward the
// higher edit score, then the simpler config: static first, smaller
// C_min/C_abs_min, smaller b, smaller kappa. Throws std::invalid_argument
// when no pair or no valid grid point exists, or when a class-based grid is
// given without stats.
GridSearchResult grid_search(const std::vector<std::pair<LabelStream, LabelStream>>& pairs,
                             const GridSpec& grid,
                             std::shared_ptr<const ClassLengthStats> stats = nullptr);

} // namespace otalc
