#include "fraudkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "fraudkit/rng.hpp"

namespace fraudkit {

std::string to_string(DatasetId id) { return id == DatasetId::Phishing ? "phishing" : "creditcard"; }

DatasetId parse_dataset_id(const std::string& name) {
    if (name == "phishing") return DatasetId::Phishing;
    if (name == "creditcard" || name == "credit_card") return DatasetId::CreditCard;
    throw std::invalid_argument("unknown dataset '" + name + "' (expected phishing or creditcard)");
}

DatasetProfile dataset_profile(DatasetId id) {
    if (id == DatasetId::Phishing) return {id, "phishing", {}};
    return {id, "Class", {"Time", "Amount"}};
}

ParamSet preset_params(DatasetId dataset, ModelFamily family) {
    const bool phish = dataset == DatasetId::Phishing;
    switch (family) {
        case ModelFamily::LR: return phish ? ParamSet{{"C", 5.0}, {"max_iter", 500}} : ParamSet{{"C", 3.0}, {"max_iter", 100}};
        case ModelFamily::DT: return ParamSet{{"max_depth", nullptr}, {"min_samples_split", 2}};
        case ModelFamily::RF:
            return {{"n_estimators", phish ? 100 : 50},
                    {"max_depth", phish ? 20 : 12},
                    {"oob_score", true},
                    {"warm_start", true}};
        case ModelFamily::XGB:
            return {{"n_estimators", phish ? 200 : 100},
                    {"max_depth", phish ? 15 : 11},
                    {"colsample_bytree", 0.9},
                    {"scale_pos_weight", phish ? "ratio" : "sqrt_ratio"},
                    {"learning_rate", 0.1},
                    {"gamma", 0.3}};
    }
    return ParamSet::object();
}

SeedPlan SeedPlan::from_master(std::uint64_t master) {
    return {derive_seed(master, 1), derive_seed(master, 2), derive_seed(master, 3), derive_seed(master, 4)};
}

ParamSet ExperimentSpec::resolved_params() const { return params ? *params : preset_params(dataset, model); }

nlohmann::json to_json(const ExperimentSpec& s) {
    return {{"dataset", to_string(s.dataset)},
            {"model", to_string(s.model)},
            {"resampler", to_string(s.resampler)},
            {"smote_k", s.smote_k},
            {"enn_k", s.enn_k},
            {"params", s.params ? *s.params : nlohmann::json("table3")},
            {"seed", s.seed},
            {"threshold", s.threshold}};
}

ExperimentSpec spec_from_json(const nlohmann::json& j, ExperimentSpec s) {
    if (!j.is_object()) throw std::invalid_argument("experiment spec must be a JSON object");
    if (j.contains("dataset")) s.dataset = parse_dataset_id(j.at("dataset").get<std::string>());
    if (j.contains("model")) s.model = parse_model_family(j.at("model").get<std::string>());
    if (j.contains("resampler")) s.resampler = parse_resample_kind(j.at("resampler").get<std::string>());
    if (j.contains("smote_k")) s.smote_k = j.at("smote_k").get<int>();
    if (j.contains("enn_k")) s.enn_k = j.at("enn_k").get<int>();
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (p.is_string() && p.get<std::string>() == "table3") s.params.reset();
        else if (p.is_object()) s.params = p;
        else throw std::invalid_argument("params must be an object or \"table3\"");
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threshold")) s.threshold = j.at("threshold").get<double>();
    if (s.smote_k < 1 || s.enn_k < 1) throw std::invalid_argument("smote_k and enn_k must be >= 1");
    if (!(s.threshold >= 0.0 && s.threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0,1]");
    return s;
}

PreparedData prepare_data(const Dataset& raw, DatasetId dataset, std::uint64_t master_seed) {
    const SeedPlan plan = SeedPlan::from_master(master_seed);
    const DatasetProfile profile = dataset_profile(dataset);
    PreparedData out;
    out.dataset = dataset;
    out.seed = master_seed;
    out.split = stratified_split(raw, 0.2, plan.split);
    const Dataset train_raw = raw.subset(out.split.train_indices);
    out.zscore = zscore_fit(train_raw, profile.zscore_columns);
    out.train = zscore_apply(train_raw, out.zscore);
    out.test = zscore_apply(raw.subset(out.split.test_indices), out.zscore);
    return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = kFnvOffset) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t row_hash(const Dataset& ds, std::size_t i) {
    auto r = ds.row(i);
    const Label y = ds.label(i);
    return fnv1a(&y, 1, fnv1a(r.data(), r.size() * sizeof(double)));
}

bool rows_equal(const Dataset& a, std::size_t i, const Dataset& b, std::size_t j) {
    if (a.label(i) != b.label(j)) return false;
    auto ra = a.row(i), rb = b.row(j);
    return std::equal(ra.begin(), ra.end(), rb.begin(), rb.end());
}

std::size_t count_synthetic_scored(const ResampledTrainingSet& train, const Dataset& test) {
    std::unordered_multimap<std::uint64_t, std::size_t> synthetic;
    for (std::size_t i = 0; i < train.dataset.rows(); ++i)
        if (train.provenance[i] == Provenance::Synthetic) synthetic.emplace(row_hash(train.dataset, i), i);
    if (synthetic.empty()) return 0;
    std::size_t hits = 0;
    for (std::size_t j = 0; j < test.rows(); ++j) {
        auto [lo, hi] = synthetic.equal_range(row_hash(test, j));
        for (auto it = lo; it != hi; ++it)
            if (rows_equal(train.dataset, it->second, test, j)) {
                ++hits;
                break;
            }
    }
    return hits;
}

std::string context(const ExperimentSpec& s) {
    return to_string(s.dataset) + "/" + to_string(s.model) + "+" + to_string(s.resampler);
}

ResampleMethod method_for(const ExperimentSpec& spec, const PreparedData& data) {
    return {spec.resampler, spec.smote_k, spec.enn_k, SeedPlan::from_master(data.seed).resample};
}

ExperimentReport run_on_resampled(const ExperimentSpec& spec, const PreparedData& data,
                                  const ResampledTrainingSet& train) {
    ExperimentReport r;
    r.spec = spec;
    r.params = spec.resolved_params();
    try {
        const SeedPlan plan = SeedPlan::from_master(data.seed);
        r.train_rows = train.dataset.rows();
        r.train_positives = train.dataset.positives();
        r.synthetic_rows = train.synthetic_count();
        r.test_rows = data.test.rows();
        r.test_positives = data.test.positives();
        r.test_fingerprint = fingerprint(data.test);
        r.synthetic_scored = count_synthetic_scored(train, data.test);

        const auto start = std::chrono::steady_clock::now();
        auto model = make_classifier(spec.model, r.params, plan.model);
        model->fit(train.dataset);
        ScoredPredictions pred{model->predict_proba(data.test), data.test.labels()};
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        r.cm = confusion_at(pred, spec.threshold);
        r.recall = recall(r.cm);
        r.precision = precision(r.cm);
        r.fpr = fpr(r.cm);
        r.roc = roc_curve(pred);
        r.auc_roc = roc_auc(pred);
        r.pr = pr_curve(pred);
        r.auc_pr = average_precision(pred);
    } catch (const std::exception& e) {
        throw std::runtime_error(context(spec) + ": " + e.what());
    }
    return r;
}

}  // namespace

std::uint64_t fingerprint(const Dataset& ds) {
    std::uint64_t h = fnv1a(ds.features().data(), ds.features().size() * sizeof(double));
    return fnv1a(ds.labels().data(), ds.labels().size(), h);
}

std::uint64_t fingerprint(std::span<const std::size_t> indices) {
    return fnv1a(indices.data(), indices.size_bytes());
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const PreparedData& data) {
    ResampledTrainingSet train;
    try {
        train = resample(data.train, method_for(spec, data));
    } catch (const std::exception& e) {
        throw std::runtime_error(context(spec) + ": " + e.what());
    }
    return run_on_resampled(spec, data, train);
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const std::string& data_path) {
    const Dataset raw = load_csv(data_path, dataset_profile(spec.dataset).label_column);
    return run_experiment(spec, prepare_data(raw, spec.dataset, spec.seed));
}

bool GridResult::all_ok() const {
    return reports.size() == 16 && std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
}

GridResult run_grid(const Dataset& raw, DatasetId dataset, std::uint64_t seed, const GridOptions& opts) {
    const PreparedData data = prepare_data(raw, dataset, seed);
    GridResult grid;
    grid.split_fingerprint = fingerprint(data.split.test_indices);

    std::vector<ParamSet> params;
    for (ModelFamily fam : kAllFamilies) {
        if (opts.retune) {
            grid.searches.push_back(randomized_search(fam, default_grid(fam), data.train, opts.tune_folds,
                                                      opts.tune_iters, SeedPlan::from_master(seed).tune,
                                                      opts.tune_scoring));
            params.push_back(grid.searches.back().best_params);
        } else {
            params.push_back(preset_params(dataset, fam));
        }
    }

    constexpr ResampleKind kinds[] = {ResampleKind::None, ResampleKind::RUS, ResampleKind::SMOTE,
                                      ResampleKind::SMOTEENN};
    grid.reports.resize(16);
    for (std::size_t k = 0; k < 4; ++k) {
        ExperimentSpec base;
        base.dataset = dataset;
        base.resampler = kinds[k];
        base.seed = seed;
        base.threshold = opts.threshold;

        std::optional<ResampledTrainingSet> train;
        std::string resample_error;
        try {
            train = resample(data.train, method_for(base, data));
        } catch (const std::exception& e) {
            resample_error = context(base) + ": " + e.what();
        }
        for (std::size_t f = 0; f < 4; ++f) {
            ExperimentSpec spec = base;
            spec.model = kAllFamilies[f];
            spec.params = params[f];
            ExperimentReport& slot = grid.reports[f * 4 + k];
            if (!train) {
                slot.spec = spec;
                slot.params = params[f];
                slot.error = resample_error;
                continue;
            }
            try {
                slot = run_on_resampled(spec, data, *train);
            } catch (const std::exception& e) {
                slot = ExperimentReport{};
                slot.spec = spec;
                slot.params = params[f];
                slot.error = e.what();
            }
        }
    }
    return grid;
}

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string format_results_csv(const std::vector<ExperimentReport>& reports) {
    std::string out =
        "dataset,model,resampler,seed,train_rows,test_rows,test_positives,tp,fp,tn,fn,recall,precision,fpr,"
        "auc_roc,auc_pr,status\n";
    for (const auto& r : reports) {
        out += to_string(r.spec.dataset) + ',' + to_string(r.spec.model) + ',' + to_string(r.spec.resampler) + ',' +
               std::to_string(r.spec.seed) + ',';
        if (!r.ok()) {
            out += ",,,,,,,,,,,,error\n";
            continue;
        }
        out += std::to_string(r.train_rows) + ',' + std::to_string(r.test_rows) + ',' +
               std::to_string(r.test_positives) + ',' + std::to_string(r.cm.tp) + ',' + std::to_string(r.cm.fp) +
               ',' + std::to_string(r.cm.tn) + ',' + std::to_string(r.cm.fn) + ',' + fmt6(r.recall) + ',' +
               fmt6(r.precision) + ',' + fmt6(r.fpr) + ',' + fmt6(r.auc_roc) + ',' + fmt6(r.auc_pr) + ",ok\n";
    }
    return out;
}

nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j{{"spec", to_json(r.spec)}, {"params", r.params}, {"status", r.ok() ? "ok" : "error"}};
    if (!r.ok()) {
        j["error"] = r.error;
        return j;
    }
    j["tp"] = r.cm.tp;
    j["fp"] = r.cm.fp;
    j["tn"] = r.cm.tn;
    j["fn"] = r.cm.fn;
    j["recall"] = r.recall.value;
    j["precision"] = r.precision.value;
    j["fpr"] = r.fpr.value;
    j["degenerate"] = {{"recall", r.recall.degenerate}, {"precision", r.precision.degenerate}, {"fpr", r.fpr.degenerate}};
    j["auc_roc"] = r.auc_roc;
    j["auc_pr"] = r.auc_pr;
    j["train_rows"] = r.train_rows;
    j["train_positives"] = r.train_positives;
    j["synthetic_rows"] = r.synthetic_rows;
    j["test_rows"] = r.test_rows;
    j["test_positives"] = r.test_positives;
    j["test_fingerprint"] = r.test_fingerprint;
    j["synthetic_scored"] = r.synthetic_scored;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

nlohmann::json results_json(const GridResult& grid, const nlohmann::json& metadata) {
    nlohmann::json meta = metadata.is_object() ? metadata : nlohmann::json::object();
    meta["tool"] = "fraudkit";
    meta["compiler"] = __VERSION__;
    meta["split_fingerprint"] = grid.split_fingerprint;
    meta["seed_streams"] = {{"split", 1}, {"resample", 2}, {"model", 3}, {"tune", 4}};
    nlohmann::json doc{{"metadata", meta}, {"experiments", nlohmann::json::array()}};
    for (const auto& r : grid.reports) doc["experiments"].push_back(to_json(r));
    if (!grid.searches.empty()) {
        auto& s = doc["searches"] = nlohmann::json::array();
        for (const auto& sr : grid.searches) s.push_back(sr.to_json());
    }
    return doc;
}

ReportFiles emit_report(const GridResult& grid, const std::string& dir, const nlohmann::json& metadata) {
    if (grid.reports.empty()) throw std::invalid_argument("emit_report: no reports");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "curves", ec);
    if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());

    auto write = [](const fs::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
        out << text;
        if (!out) throw std::runtime_error("write failed for '" + p.string() + "'");
    };

    ReportFiles files;
    files.csv = (fs::path(dir) / "results.csv").string();
    files.json = (fs::path(dir) / "results.json").string();
    write(files.csv, format_results_csv(grid.reports));
    write(files.json, results_json(grid, metadata).dump(2) + "\n");
    for (const auto& r : grid.reports) {
        if (!r.ok()) continue;
        const std::string stem = to_string(r.spec.dataset) + "_" + to_string(r.spec.model) + "_" + to_string(r.spec.resampler);
        for (const Curve* c : {&r.roc, &r.pr}) {
            const fs::path p = fs::path(dir) / "curves" / (stem + (c->kind == CurveKind::ROC ? "_roc.csv" : "_pr.csv"));
            write(p, format_curve_csv(*c));
            files.curves.push_back(p.string());
        }
    }
    return files;
}

std::vector<ExperimentSpec> specs_from_results_json(const nlohmann::json& doc) {
    std::vector<ExperimentSpec> specs;
    for (const auto& e : doc.at("experiments")) specs.push_back(spec_from_json(e.at("spec")));
    return specs;
}

}  // namespace fraudkit
