#include "otalc/tune.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "otalc/parallel.hpp"

namespace otalc {

Objective Objective::parse(const std::string& text) {
    Objective obj;
    if (text == "edit") {
        obj.kind = Kind::Edit;
    } else if (text == "acc") {
        obj.kind = Kind::Acc;
    } else if (text == "mean_f1_plus_edit") {
        obj.kind = Kind::MeanF1PlusEdit;
    } else if (text.rfind("f1@", 0) == 0) {
        obj.kind = Kind::F1At;
        obj.threshold = std::stod(text.substr(3));
        if (obj.threshold <= 0.0 || obj.threshold > 1.0) {
            throw std::invalid_argument("objective threshold must lie in (0, 1]");
        }
    } else {
        throw std::invalid_argument("unknown objective: " + text);
    }
    return obj;
}

std::string Objective::to_string() const {
    switch (kind) {
    case Kind::Edit:
        return "edit";
    case Kind::Acc:
        return "acc";
    case Kind::MeanF1PlusEdit:
        return "mean_f1_plus_edit";
    case Kind::F1At:
        break;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "f1@%g", threshold);
    return buf;
}

double Objective::value(const MetricsReport& rep) const {
    switch (kind) {
    case Kind::F1At:
        return rep.at_threshold(threshold).f1;
    case Kind::Edit:
        return rep.edit;
    case Kind::Acc:
        return rep.acc;
    case Kind::MeanF1PlusEdit: {
        double mean = 0.0;
        for (double thr : default_iou_thresholds()) {
            mean += rep.at_threshold(thr).f1;
        }
        mean /= 3.0;
        return (100.0 * mean + rep.edit) / 2.0;
    }
    }
    return 0.0;
}

GridSpec GridSpec::from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    GridSpec grid;
    auto read_ints = [&doc](const char* key, std::vector<int>& out) {
        if (doc.contains(key)) {
            out = doc[key].get<std::vector<int>>();
        }
    };
    read_ints("static_c_min", grid.static_c_min);
    read_ints("static_b", grid.static_b);
    read_ints("c_abs_min", grid.c_abs_min);
    read_ints("class_b", grid.class_b);
    if (doc.contains("kappa")) {
        grid.kappa = doc["kappa"].get<std::vector<double>>();
    }
    if (doc.contains("objective")) {
        grid.objective = Objective::parse(doc["objective"].get<std::string>());
    }
    return grid;
}

std::string GridSpec::to_json() const {
    nlohmann::json doc;
    doc["static_c_min"] = static_c_min;
    doc["static_b"] = static_b;
    doc["kappa"] = kappa;
    doc["c_abs_min"] = c_abs_min;
    doc["class_b"] = class_b;
    doc["objective"] = objective.to_string();
    return doc.dump(2);
}

std::string GridRow::params_csv() const {
    char buf[96];
    if (class_based) {
        std::snprintf(buf, sizeof(buf), "class,,%g,%d,%d", kappa, c_abs_min, b);
    } else {
        std::snprintf(buf, sizeof(buf), "static,%d,,,%d", c_min, b);
    }
    return buf;
}

CleanerConfig GridSearchResult::best_config(std::shared_ptr<const ClassLengthStats> stats) const {
    if (best.class_based) {
        return CleanerConfig(
            CutoffPolicy::class_based(best.kappa, best.c_abs_min, std::move(stats)), best.b);
    }
    return CleanerConfig(CutoffPolicy::static_cutoff(best.c_min), best.b);
}

std::string GridSearchResult::table_csv() const {
    std::string out =
        "policy,c_min,kappa,c_abs_min,b," + MetricsReport::csv_header(thresholds) + '\n';
    for (const GridRow& row : table) {
        out += row.params_csv() + ',' + row.metrics.csv_row() + '\n';
    }
    return out;
}

namespace {

// Objective first, edit as the metric tie-break (F1@0.5 when the objective is
// already edit), then the simpler config.
bool row_precedes(const GridRow& a, const GridRow& b, const Objective& objective) {
    if (a.objective_value != b.objective_value) {
        return a.objective_value > b.objective_value;
    }
    const double tie_a = objective.kind == Objective::Kind::Edit ? a.metrics.at_threshold(0.5).f1
                                                                 : a.metrics.edit;
    const double tie_b = objective.kind == Objective::Kind::Edit ? b.metrics.at_threshold(0.5).f1
                                                                 : b.metrics.edit;
    if (tie_a != tie_b) {
        return tie_a > tie_b;
    }
    if (a.class_based != b.class_based) {
        return !a.class_based;
    }
    const int size_a = a.class_based ? a.c_abs_min : a.c_min;
    const int size_b = b.class_based ? b.c_abs_min : b.c_min;
    if (size_a != size_b) {
        return size_a < size_b;
    }
    if (a.b != b.b) {
        return a.b < b.b;
    }
    return a.kappa < b.kappa;
}

} // namespace

GridSearchResult grid_search(const std::vector<std::pair<LabelStream, LabelStream>>& pairs,
                             const GridSpec& grid,
                             std::shared_ptr<const ClassLengthStats> stats) {
    if (pairs.empty()) {
        throw std::invalid_argument("grid search requires at least one (raw, gt) pair");
    }
    const bool wants_class_grid =
        !grid.kappa.empty() && !grid.c_abs_min.empty() && !grid.class_b.empty();
    if (wants_class_grid && !stats) {
        throw std::invalid_argument("class-based grid requires fitted length stats");
    }

    struct Point {
        GridRow row;
        CutoffPolicy policy;
    };
    std::vector<Point> points;
    for (int c_min : grid.static_c_min) {
        for (int b : grid.static_b) {
            if (c_min < 1 || b < 1 || b >= c_min) {
                continue; // the cleaner's own construction rule
            }
            GridRow row;
            row.c_min = c_min;
            row.b = b;
            points.push_back({row, CutoffPolicy::static_cutoff(c_min)});
        }
    }
    if (wants_class_grid) {
        for (double kappa : grid.kappa) {
            for (int c_abs : grid.c_abs_min) {
                if (kappa < 0.0 || c_abs < 1) {
                    continue;
                }
                CutoffPolicy policy = CutoffPolicy::class_based(kappa, c_abs, stats);
                for (int b : grid.class_b) {
                    if (b < 1 || b >= policy.min_cutoff()) {
                        continue;
                    }
                    GridRow row;
                    row.class_based = true;
                    row.kappa = kappa;
                    row.c_abs_min = c_abs;
                    row.b = b;
                    points.push_back({row, policy});
                }
            }
        }
    }
    if (points.empty()) {
        throw std::invalid_argument("grid contains no valid (cutoff, b) combination");
    }

    std::vector<double> thresholds = default_iou_thresholds();
    if (grid.objective.kind == Objective::Kind::F1At) {
        bool known = false;
        for (double thr : thresholds) {
            known = known || std::abs(thr - grid.objective.threshold) < 1e-12;
        }
        if (!known) {
            thresholds.push_back(grid.objective.threshold);
            std::sort(thresholds.begin(), thresholds.end());
        }
    }

    const ClassMapPtr& map = pairs.front().second.class_map;
    parallel_for(static_cast<std::int64_t>(points.size()), [&](std::int64_t i) {
        Point& point = points[static_cast<std::size_t>(i)];
        MetricsAccumulator pooled(thresholds);
        for (const auto& [raw, gt] : pairs) {
            Cleaner cleaner(CleanerConfig(point.policy, point.row.b), map);
            for (ClassId label : raw.labels) {
                cleaner.push(label);
            }
            cleaner.finalize(FinalizePolicy::DiscardUnconfirmed);
            pooled.add(cleaner.tidy_snapshot(), gt);
        }
        point.row.metrics = pooled.report();
        point.row.objective_value = grid.objective.value(point.row.metrics);
    });

    GridSearchResult result;
    result.thresholds = thresholds;
    result.table.reserve(points.size());
    for (Point& point : points) {
        result.table.push_back(std::move(point.row));
    }
    std::stable_sort(result.table.begin(), result.table.end(),
                     [&](const GridRow& a, const GridRow& b) {
                         return row_precedes(a, b, grid.objective);
                     });
    result.best = result.table.front();
    return result;
}

} // namespace otalc
