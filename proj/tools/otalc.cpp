#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otalc/cleaner.hpp"
#include "otalc/core.hpp"
#include "otalc/cutoffs.hpp"
#include "otalc/io.hpp"
#include "otalc/metrics.hpp"
#include "otalc/sampling.hpp"
#include "otalc/simulate.hpp"
#include "otalc/tune.hpp"

namespace {

namespace fs = std::filesystem;
using namespace otalc;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// "static:<n>" or "class:<kappa>,<abs>:<stats.json>"
CutoffPolicy parse_cutoff_flag(const std::string& text) {
    if (text.rfind("static:", 0) == 0) {
        return CutoffPolicy::static_cutoff(std::stoi(text.substr(7)));
    }
    if (text.rfind("class:", 0) == 0) {
        const std::string rest = text.substr(6);
        const auto split = rest.find(':');
        if (split == std::string::npos) {
            throw std::invalid_argument("class cutoff needs \"class:<kappa>,<abs>:<stats.json>\"");
        }
        const std::string params = rest.substr(0, split);
        const auto comma = params.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("class cutoff needs \"class:<kappa>,<abs>:<stats.json>\"");
        }
        const double kappa = std::stod(params.substr(0, comma));
        const int c_abs = std::stoi(params.substr(comma + 1));
        auto stats = std::make_shared<ClassLengthStats>(load_stats_file(rest.substr(split + 1)));
        return CutoffPolicy::class_based(kappa, c_abs, std::move(stats));
    }
    throw std::invalid_argument("cutoff must be \"static:<n>\" or \"class:<kappa>,<abs>:<stats>\"");
}

std::vector<double> parse_thresholds(const std::string& text) {
    std::vector<double> thresholds;
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        thresholds.push_back(std::stod(cell));
    }
    if (thresholds.empty()) {
        throw std::invalid_argument("at least one IoU threshold is required");
    }
    return thresholds;
}

int run_clean(const std::string& cutoff_flag, int bridge, const std::string& finalize_flag,
              const std::string& emission_flag, const fs::path& mapping_path) {
    const auto map = std::make_shared<const ClassMap>(parse_mapping_file(mapping_path));
    const EmissionPolicy emission = emission_flag == "raw-previous"
                                        ? EmissionPolicy::RawPrevious
                                        : EmissionPolicy::LastConfirmed;
    // Config problems must surface before any input is consumed.
    CleanerConfig config(parse_cutoff_flag(cutoff_flag), bridge, emission);
    Cleaner cleaner(config, map, /*retain_history=*/false);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(std::cin, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto id = map->id_of(line);
        if (!id) {
            throw std::runtime_error("stdin:" + std::to_string(line_no) +
                                     ": unknown label name \"" + line + "\"");
        }
        for (const CleanEvent& event : cleaner.push(*id)) {
            std::cout << format_event(event, *map) << '\n';
        }
        std::cout.flush();
    }
    const FinalizePolicy fin = finalize_flag == "confirm" ? FinalizePolicy::ConfirmTrailing
                                                          : FinalizePolicy::DiscardUnconfirmed;
    for (const CleanEvent& event : cleaner.finalize(fin)) {
        std::cout << format_event(event, *map) << '\n';
    }
    std::cout.flush();
    return 0;
}

int run_eval(const DatasetLayout& layout, const std::string& thresholds_flag) {
    const auto map = std::make_shared<const ClassMap>(parse_mapping_file(layout.mapping_file));
    const std::vector<double> thresholds = parse_thresholds(thresholds_flag);
    MetricsAccumulator pooled(thresholds);

    std::cout << "sequence," << MetricsReport::csv_header(thresholds) << '\n';
    bool skipped = false;
    for (const SequencePair& pair : scan_dataset(layout)) {
        const LabelStream gt = parse_labels_file(pair.gt, map);
        const LabelStream pred = parse_labels_file(pair.pred, map);
        if (pred.size() != gt.size()) {
            std::cerr << pair.name << ": length mismatch (pred " << pred.size() << ", gt "
                      << gt.size() << "), skipped\n";
            skipped = true;
            continue;
        }
        pooled.add(pred, gt);
        std::cout << pair.name << ',' << report(pred, gt, thresholds).csv_row() << '\n';
    }
    std::cout << "POOLED," << pooled.report().csv_row() << '\n';
    return skipped ? kExitData : 0;
}

int run_fit_stats(const fs::path& gt_dir, const fs::path& mapping_path, const std::string& out) {
    const auto map = std::make_shared<const ClassMap>(parse_mapping_file(mapping_path));
    std::vector<LabelStream> streams;
    for (const fs::path& file : list_label_files(gt_dir)) {
        streams.push_back(parse_labels_file(file, map));
    }
    const ClassLengthStats stats = fit_class_stats(streams);
    if (out == "-") {
        std::cout << stats.to_json() << '\n';
    } else {
        save_stats_file(out, stats);
    }
    return 0;
}

int run_tune(const DatasetLayout& layout, const fs::path& grid_path, const std::string& stats_path,
             const std::string& out) {
    const auto map = std::make_shared<const ClassMap>(parse_mapping_file(layout.mapping_file));

    std::ifstream grid_in(grid_path);
    if (!grid_in) {
        throw std::runtime_error("cannot open " + grid_path.string());
    }
    std::ostringstream grid_text;
    grid_text << grid_in.rdbuf();
    GridSpec grid;
    try {
        grid = GridSpec::from_json(grid_text.str());
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(grid_path.string() + ": " + err.what());
    }

    std::shared_ptr<const ClassLengthStats> stats;
    if (!stats_path.empty()) {
        stats = std::make_shared<const ClassLengthStats>(load_stats_file(stats_path));
    }

    std::vector<std::pair<LabelStream, LabelStream>> pairs;
    for (const SequencePair& pair : scan_dataset(layout)) {
        LabelStream gt = parse_labels_file(pair.gt, map);
        LabelStream raw = parse_labels_file(pair.pred, map);
        if (raw.size() != gt.size()) {
            throw std::runtime_error(pair.name + ": length mismatch (pred " +
                                     std::to_string(raw.size()) + ", gt " +
                                     std::to_string(gt.size()) + ")");
        }
        pairs.emplace_back(std::move(raw), std::move(gt));
    }

    const GridSearchResult result = grid_search(pairs, grid, stats);
    if (out == "-") {
        std::cout << result.table_csv();
    } else {
        std::ofstream file(out);
        if (!file) {
            throw std::runtime_error("cannot write " + out);
        }
        file << result.table_csv();
    }
    std::cerr << "best: " << result.best.params_csv() << " " << grid.objective.to_string() << "="
              << result.best.objective_value << '\n';
    return 0;
}

int run_simulate(const fs::path& out_dir, int classes, int streams, std::int64_t frames,
                 std::uint64_t seed, double mean_len, double len_spread, const NoiseConfig& noise,
                 bool with_softmax) {
    if (classes < 1 || streams < 1 || frames < 0 || mean_len < 1.0 || len_spread < 0.0) {
        throw std::invalid_argument("bad simulate parameters");
    }
    const auto map = std::make_shared<const ClassMap>(ClassMap::numbered(classes));
    // mean_len is the frame-space mean of the length distribution.
    const double mu_log = std::log(mean_len) - len_spread * len_spread / 2.0;
    const GenModel model = GenModel::uniform(map, mu_log, len_spread);

    fs::create_directories(out_dir / "gt");
    fs::create_directories(out_dir / "pred");
    if (with_softmax) {
        fs::create_directories(out_dir / "softmax");
    }

    std::ofstream mapping(out_dir / "mapping.txt");
    for (ClassId c = 0; c < map->size(); ++c) {
        mapping << c << ' ' << map->name(c) << '\n';
    }

    Rng rng(seed);
    char name[32];
    for (int s = 0; s < streams; ++s) {
        std::snprintf(name, sizeof(name), "seq_%03d.txt", s);
        const LabelStream gt = gen_ground_truth(model, frames, rng);
        const CorruptResult corrupted = corrupt(gt, noise, rng, with_softmax);
        write_labels_file(out_dir / "gt" / name, gt);
        write_labels_file(out_dir / "pred" / name, corrupted.stream);
        if (with_softmax) {
            std::snprintf(name, sizeof(name), "seq_%03d.csv", s);
            write_softmax_csv_file(out_dir / "softmax" / name, corrupted.softmax);
        }
    }

    nlohmann::json manifest;
    manifest["classes"] = classes;
    manifest["streams"] = streams;
    manifest["frames"] = frames;
    manifest["seed"] = seed;
    manifest["mean_len"] = mean_len;
    manifest["len_spread"] = len_spread;
    manifest["noise"] = {{"blip_rate", noise.blip_rate},
                         {"blip_len_max", noise.blip_len_max},
                         {"boundary_jitter_max", noise.boundary_jitter_max},
                         {"sub_rate", noise.sub_rate},
                         {"softmax_epsilon", noise.softmax_epsilon}};
    manifest["softmax"] = with_softmax;
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
    return 0;
}

void print_indices(const std::vector<FrameIndex>& indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) {
            std::cout << ' ';
        }
        std::cout << indices[i];
    }
    std::cout << '\n';
}

int run_bench(std::int64_t frames, int classes, int c_min, int bridge, std::uint64_t seed) {
    const auto map = std::make_shared<const ClassMap>(ClassMap::numbered(classes));
    Rng rng(seed);
    const double mean_len = std::max(24.0, 6.0 * c_min);
    const GenModel model = GenModel::uniform(map, std::log(mean_len), 0.4);
    const LabelStream gt = gen_ground_truth(model, frames, rng);
    NoiseConfig noise;
    noise.blip_rate = 0.6;
    noise.blip_len_max = std::max(1, bridge);
    noise.sub_rate = 0.002;
    const LabelStream raw = corrupt(gt, noise, rng).stream;

    CleanerConfig config(CutoffPolicy::static_cutoff(c_min), bridge);
    Cleaner cleaner(config, map, /*retain_history=*/false);
    std::int64_t events = 0;
    const auto begin = std::chrono::steady_clock::now();
    for (ClassId label : raw.labels) {
        events += static_cast<std::int64_t>(cleaner.push(label).size());
    }
    const auto end = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(end - begin).count();
    const double fps = seconds > 0.0 ? static_cast<double>(raw.size()) / seconds : 0.0;
    std::cout << "cleaned " << raw.size() << " frames in " << seconds << " s: " << fps
              << " frames/s (" << events << " events)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online temporal action segmentation post-processing toolkit"};
    app.require_subcommand(1);

    // clean
    auto* clean = app.add_subcommand("clean", "Clean a live label stream from stdin");
    std::string cutoff_flag;
    int bridge = 1;
    std::string finalize_flag = "discard";
    std::string emission_flag = "last-confirmed";
    std::string mapping_flag;
    clean->add_option("--cutoff", cutoff_flag,
                      "static:<n> or class:<kappa>,<abs>:<stats.json>")->required();
    clean->add_option("--b", bridge, "bridging width in frames")->required();
    clean->add_option("--finalize", finalize_flag, "discard|confirm")
        ->check(CLI::IsMember({"discard", "confirm"}));
    clean->add_option("--emission", emission_flag, "last-confirmed|raw-previous")
        ->check(CLI::IsMember({"last-confirmed", "raw-previous"}));
    clean->add_option("--mapping", mapping_flag, "class mapping file")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
    DatasetLayout layout;
    std::string thresholds_flag = "0.1,0.25,0.5";
    eval->add_option("--gt-dir", layout.gt_dir)->required();
    eval->add_option("--pred-dir", layout.pred_dir)->required();
    eval->add_option("--mapping", layout.mapping_file)->required();
    eval->add_option("--thresholds", thresholds_flag, "comma-separated IoU thresholds");

    // fit-stats
    auto* fit = app.add_subcommand("fit-stats", "Fit per-class segment-length statistics");
    std::string fit_gt_dir;
    std::string fit_mapping;
    std::string fit_out = "-";
    fit->add_option("--gt-dir", fit_gt_dir)->required();
    fit->add_option("--mapping", fit_mapping)->required();
    fit->add_option("--out", fit_out, "output JSON path, - for stdout");

    // tune
    auto* tune = app.add_subcommand("tune", "Grid search cleaning parameters");
    DatasetLayout tune_layout;
    std::string grid_flag;
    std::string stats_flag;
    std::string tune_out = "-";
    tune->add_option("--gt-dir", tune_layout.gt_dir)->required();
    tune->add_option("--pred-dir", tune_layout.pred_dir)->required();
    tune->add_option("--mapping", tune_layout.mapping_file)->required();
    tune->add_option("--grid", grid_flag, "grid spec JSON file")->required();
    tune->add_option("--stats", stats_flag, "fitted stats JSON (required for class grids)");
    tune->add_option("--out", tune_out, "output CSV path, - for stdout");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate synthetic streams");
    std::string sim_out_dir;
    int sim_classes = 6;
    int sim_streams = 1;
    std::int64_t sim_frames = 5000;
    std::uint64_t sim_seed = 1;
    double sim_mean_len = 60.0;
    double sim_len_spread = 0.35;
    NoiseConfig sim_noise;
    bool sim_softmax = false;
    simulate->add_option("--out-dir", sim_out_dir)->required();
    simulate->add_option("--classes", sim_classes);
    simulate->add_option("--streams", sim_streams);
    simulate->add_option("--frames", sim_frames);
    simulate->add_option("--seed", sim_seed);
    simulate->add_option("--mean-len", sim_mean_len, "frame-space mean segment length");
    simulate->add_option("--len-spread", sim_len_spread, "sigma of log segment length");
    simulate->add_option("--blip-rate", sim_noise.blip_rate);
    simulate->add_option("--blip-len-max", sim_noise.blip_len_max);
    simulate->add_option("--jitter", sim_noise.boundary_jitter_max);
    simulate->add_option("--sub-rate", sim_noise.sub_rate);
    simulate->add_option("--softmax-epsilon", sim_noise.softmax_epsilon);
    simulate->add_flag("--softmax", sim_softmax, "also write softmax CSV files");

    // sample
    auto* sample = app.add_subcommand("sample", "Print clip frame indices");
    std::string sample_mode;
    int sample_T = 8;
    int sample_tau = 8;
    FrameIndex seg_start = 0;
    FrameIndex seg_end = 0;
    int draws = 1;
    std::uint64_t sample_seed = 1;
    FrameIndex sample_t = 0;
    FrameIndex clip_start = 0;
    FrameIndex video_len = 1;
    std::string policy_flag = "clamp";
    bool include_current = false;
    sample->add_option("--mode", sample_mode, "dense|surround|inference|clip")
        ->required()
        ->check(CLI::IsMember({"dense", "surround", "inference", "clip"}));
    sample->add_option("--T", sample_T);
    sample->add_option("--tau", sample_tau);
    sample->add_option("--seg-start", seg_start);
    sample->add_option("--seg-end", seg_end);
    sample->add_option("--draws", draws);
    sample->add_option("--seed", sample_seed);
    sample->add_option("--t", sample_t, "current frame (inference mode)");
    sample->add_option("--start", clip_start, "clip start (clip mode)");
    sample->add_option("--video-len", video_len);
    sample->add_option("--policy", policy_flag)->check(CLI::IsMember({"clamp", "wrap"}));
    sample->add_flag("--include-current", include_current,
                     "end inference clips at t instead of t-tau");

    // bench
    auto* bench = app.add_subcommand("bench", "Measure cleaner throughput");
    std::int64_t bench_frames = 1000000;
    int bench_classes = 10;
    int bench_c_min = 9;
    int bench_b = 2;
    std::uint64_t bench_seed = 7;
    bench->add_option("--frames", bench_frames);
    bench->add_option("--classes", bench_classes);
    bench->add_option("--c-min", bench_c_min);
    bench->add_option("--b", bench_b);
    bench->add_option("--seed", bench_seed);

    try {
        app.parse(argc, argv);

        if (*clean) {
            return run_clean(cutoff_flag, bridge, finalize_flag, emission_flag, mapping_flag);
        }
        if (*eval) {
            return run_eval(layout, thresholds_flag);
        }
        if (*fit) {
            return run_fit_stats(fit_gt_dir, fit_mapping, fit_out);
        }
        if (*tune) {
            return run_tune(tune_layout, grid_flag, stats_flag, tune_out);
        }
        if (*simulate) {
            return run_simulate(sim_out_dir, sim_classes, sim_streams, sim_frames, sim_seed,
                                sim_mean_len, sim_len_spread, sim_noise, sim_softmax);
        }
        if (*sample) {
            const ClipSpec spec(sample_T, sample_tau);
            if (sample_mode == "inference") {
                print_indices(inference_clip_indices(sample_t, spec,
                                                     include_current
                                                         ? InferenceAlignment::IncludeCurrent
                                                         : InferenceAlignment::ExcludeCurrent));
            } else if (sample_mode == "clip") {
                const BoundaryPolicy policy = policy_flag == "wrap" ? BoundaryPolicy::Wrap
                                                                    : BoundaryPolicy::ClampRepeat;
                print_indices(clip_indices(clip_start, spec, policy, video_len));
            } else {
                if (seg_end < seg_start) {
                    throw std::invalid_argument("--seg-end must be >= --seg-start");
                }
                const Segment seg{0, seg_start, seg_end};
                Rng rng(sample_seed);
                for (int i = 0; i < draws; ++i) {
                    std::cout << (sample_mode == "dense" ? dense_train_start(seg, spec, rng)
                                                         : surround_train_start(seg, spec, rng))
                              << '\n';
                }
            }
            return 0;
        }
        if (*bench) {
            return run_bench(bench_frames, bench_classes, bench_c_min, bench_b, bench_seed);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
