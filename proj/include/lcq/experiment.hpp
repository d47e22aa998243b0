#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcq/data.hpp"
#include "lcq/kernels.hpp"
#include "lcq/metrics.hpp"

namespace lcq {

inline constexpr const char *kModelLinear = "svm_l";
inline constexpr const char *kModelRbf = "svm_rbf";
inline constexpr const char *kModelQuantum = "svm_q";

struct ExperimentConfig {
    // Data source: a feature table (optionally a separate test table, else
    // the pool is split by image hash), or the synthetic generator.
    std::string data_path;
    std::string test_data_path;
    bool use_synth = false;
    SynthParams synth_train{4, 200, 0.3, 6.0, 0};
    SynthParams synth_test{4, 250, 0.3, 6.0, 0};

    std::vector<std::string> models = {kModelLinear, kModelRbf, kModelQuantum};
    std::vector<int> feature_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8};

    int layers = 4;
    std::string gate_family = "ry-cz";
    std::uint64_t theta_seed = 0; // 0: derive from the base seed

    double svm_c = 1.0;
    double rbf_gamma = 0.0; // <= 0: data-scaled default
    int per_class = 15;

    int trials = 1;
    std::uint64_t seed = 42;
    int threads = 1;
    std::string out_dir = "out";

    bool optimize_theta = false;
    int theta_steps = 10;
    double theta_step_size = 0.2;

    void validate() const;
};

// One (trial, feature configuration, model) cell of the study.
struct GridCellResult {
    int trial = 0;
    std::string model;
    bool mag1c = false;
    int feature_removed = 0; // configuration identifier 0..8
    bool ok = false;
    std::string error;

    MetricReport metrics;
    std::vector<int> feature_ids;   // features present in this cell
    std::vector<double> lambda;     // quantum cells only
    std::vector<double> importance; // aligned with feature_ids
    bool lambda_fallback = false;

    std::uint64_t cell_seed = 0;
    double wall_seconds = 0.0; // manifest only, never in the results table
};

struct ImportanceRow {
    int feature = 0;
    double mean_p = 0.0;
    double std_p = 0.0;
    double mean_s = 0.0;
    double std_s = 0.0;
    int cells = 0; // cells contributing to the averages
};

struct ImportanceTable {
    std::vector<ImportanceRow> rows; // sorted by mean_p descending
    std::vector<GridCellResult> cells;
};

struct ExperimentData {
    Dataset train_pool;
    Dataset test_pool;
};

// Loads or generates the train/test pools for a config.
ExperimentData prepare_data(const ExperimentConfig &cfg);

// The full leave-one-feature-out grid: every feature configuration in
// feature_grid crossed with every model, repeated trials times. Cells run
// concurrently (cfg.threads) but the result order and content are
// independent of the thread count. A failing cell is recorded and the run
// continues.
std::vector<GridCellResult> run_grid(const ExperimentConfig &cfg);

// Quantum-only grid plus per-feature aggregation: mean and sample standard
// deviation of the importance score, and of the metric sum
// SEN+SPE+ACC+F1+MCC, over all cells in which the feature was present.
ImportanceTable run_importance_study(const ExperimentConfig &cfg);

// Writes results.csv (machine readable, byte-deterministic for a fixed
// config and seed), results.txt (aligned table) and manifest.json (config
// echo, seeds, timings) into out_dir. Empty result lists are an error and
// produce no files.
void emit_report(const std::vector<GridCellResult> &results,
                 const ExperimentConfig &cfg, const std::string &out_dir);

void emit_importance_report(const ImportanceTable &table,
                            const ExperimentConfig &cfg,
                            const std::string &out_dir);

std::string model_display_name(const std::string &model);

} // namespace lcq
