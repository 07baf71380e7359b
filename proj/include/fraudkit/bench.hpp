#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudkit/dataset.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/models.hpp"
#include "fraudkit/resample.hpp"
#include "fraudkit/tune.hpp"

namespace fraudkit {

enum class DatasetId { Phishing, CreditCard };

std::string to_string(DatasetId id);
DatasetId parse_dataset_id(const std::string& name);

struct DatasetProfile {
    DatasetId id;
    std::string label_column;
    std::vector<std::string> zscore_columns;  // normalized with train-partition statistics
};

DatasetProfile dataset_profile(DatasetId id);

/// Reference hyperparameters for a dataset and model family.
ParamSet preset_params(DatasetId dataset, ModelFamily family);

/// Stage seeds derived from one master seed (stream 1 = split, 2 = resample, 3 = model, 4 = tune).
struct SeedPlan {
    std::uint64_t split, resample, model, tune;
    static SeedPlan from_master(std::uint64_t master);
};

struct ExperimentSpec {
    DatasetId dataset = DatasetId::CreditCard;
    ModelFamily model = ModelFamily::XGB;
    ResampleKind resampler = ResampleKind::None;
    int smote_k = 5;
    int enn_k = 3;
    std::optional<ParamSet> params;  // nullopt: use the dataset preset
    std::uint64_t seed = 0;
    double threshold = 0.5;

    ParamSet resolved_params() const;
    bool operator==(const ExperimentSpec&) const = default;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Missing fields keep their defaults; "params": "table3" selects the preset.
ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec base = {});

/// Stratified 80/20 split with the normalization fitted on the training rows.
struct PreparedData {
    DatasetId dataset;
    std::uint64_t seed = 0;
    SplitPair split;
    ZScoreStats zscore;
    Dataset train;
    Dataset test;
};

PreparedData prepare_data(const Dataset& raw, DatasetId dataset, std::uint64_t master_seed);

struct ExperimentReport {
    ExperimentSpec spec;
    ParamSet params;  // as actually fitted
    ConfusionMatrix cm;
    Rate recall, precision, fpr;
    double auc_roc = 0.0, auc_pr = 0.0;
    std::size_t train_rows = 0;        // after resampling
    std::size_t train_positives = 0;   // after resampling
    std::size_t synthetic_rows = 0;
    std::size_t test_rows = 0;
    std::size_t test_positives = 0;
    std::uint64_t test_fingerprint = 0;  // hash of the scored test rows
    std::size_t synthetic_scored = 0;    // scored rows identical to a synthetic training row
    double wall_seconds = 0.0;           // fit + predict
    Curve roc{CurveKind::ROC, {}}, pr{CurveKind::PR, {}};
    std::string error;                   // non-empty when the experiment failed

    bool ok() const { return error.empty(); }
};

nlohmann::json to_json(const ExperimentReport& r);

std::uint64_t fingerprint(const Dataset& ds);
std::uint64_t fingerprint(std::span<const std::size_t> indices);

ExperimentReport run_experiment(const ExperimentSpec& spec, const PreparedData& data);
/// Loads the CSV at `data_path` and runs the full pipeline for one spec.
ExperimentReport run_experiment(const ExperimentSpec& spec, const std::string& data_path);

struct GridOptions {
    bool retune = false;
    double threshold = 0.5;
    std::size_t tune_folds = 10;
    std::size_t tune_iters = 5;
    Scoring tune_scoring = Scoring::RocAuc;
};

struct GridResult {
    std::vector<ExperimentReport> reports;  // model-major, resampler-minor
    std::vector<SearchResult> searches;     // filled when retuning
    std::uint64_t split_fingerprint = 0;
    bool all_ok() const;
};

GridResult run_grid(const Dataset& raw, DatasetId dataset, std::uint64_t seed, const GridOptions& opts = {});

struct ReportFiles {
    std::string csv, json;
    std::vector<std::string> curves;
};

std::string format_results_csv(const std::vector<ExperimentReport>& reports);
nlohmann::json results_json(const GridResult& grid, const nlohmann::json& metadata = {});

/// Writes results.csv, results.json and curves/<dataset>_<model>_<resampler>_{roc|pr}.csv under `dir`.
ReportFiles emit_report(const GridResult& grid, const std::string& dir, const nlohmann::json& metadata = {});

/// Specs echoed in a results.json document, in report order.
std::vector<ExperimentSpec> specs_from_results_json(const nlohmann::json& doc);

}  // namespace fraudkit
