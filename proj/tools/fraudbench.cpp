// fraudbench: command-line front end for the fraudkit pipeline.
//
//   fraudbench resample --method smote --seed 1 --in train.csv --out balanced.csv
//   fraudbench tune --model xgb --dataset creditcard.csv --folds 10 --iters 5 --seed 1 --scoring roc_auc
//   fraudbench fit --model xgb --resampler orig --dataset creditcard --data creditcard.csv --seed 1
//   fraudbench bench --dataset creditcard --data creditcard.csv --seed 1 --out results/

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fraudkit/bench.hpp"
#include "fraudkit/dataset.hpp"
#include "fraudkit/resample.hpp"
#include "fraudkit/tune.hpp"

using namespace fraudkit;

namespace {

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return nlohmann::json::parse(in);
}

// Label column guess for files given without a dataset id.
std::string detect_label(const std::string& path) {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    for (const char* candidate : {"Class", "phishing"})
        if (header.find(candidate) != std::string::npos) return candidate;
    return "label";
}

struct ExperimentFlags {
    std::string config, data, out, dataset, model, resampler, params;
    std::uint64_t seed = 0;
    double threshold = 0.5;
    int smote_k = 5, enn_k = 3;
};

// Config file values first, then any flag given on the command line.
ExperimentSpec build_spec(const CLI::App& cmd, const ExperimentFlags& f, nlohmann::json& cfg) {
    cfg = f.config.empty() ? nlohmann::json::object() : read_json_file(f.config);
    auto override_with = [&](const char* opt, const char* key, const nlohmann::json& value) {
        const CLI::Option* o = cmd.get_option_no_throw(opt);
        if (o && o->count() > 0) cfg[key] = value;
    };
    override_with("--dataset", "dataset", f.dataset);
    override_with("--model", "model", f.model);
    override_with("--resampler", "resampler", f.resampler);
    override_with("--seed", "seed", f.seed);
    override_with("--threshold", "threshold", f.threshold);
    override_with("--smote-k", "smote_k", f.smote_k);
    override_with("--enn-k", "enn_k", f.enn_k);
    override_with("--data", "data", f.data);
    override_with("--out", "out", f.out);
    if (const CLI::Option* o = cmd.get_option_no_throw("--params"); o && o->count() > 0)
        cfg["params"] = f.params == "table3" ? nlohmann::json("table3") : nlohmann::json::parse(f.params);
    return spec_from_json(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imbalanced fraud-detection benchmark toolkit"};
    app.require_subcommand(1);

    // resample
    auto* rs = app.add_subcommand("resample", "Rebalance a CSV training set");
    std::string rs_method, rs_in, rs_out, rs_label;
    std::uint64_t rs_seed = 0;
    int rs_smote_k = 5, rs_enn_k = 3;
    rs->add_option("--method", rs_method, "rus | smote | smoteenn")->required();
    rs->add_option("--seed", rs_seed, "Random seed");
    rs->add_option("--in", rs_in, "Input CSV")->required();
    rs->add_option("--out", rs_out, "Output CSV")->required();
    rs->add_option("--label", rs_label, "Label column (detected from the header by default)");
    rs->add_option("--smote-k", rs_smote_k, "SMOTE neighbours");
    rs->add_option("--enn-k", rs_enn_k, "ENN neighbours");

    // tune
    auto* tn = app.add_subcommand("tune", "Randomized search with stratified k-fold CV");
    std::string tn_model, tn_data, tn_scoring = "roc_auc", tn_out, tn_label, tn_kind;
    std::size_t tn_folds = 10, tn_iters = 5;
    std::uint64_t tn_seed = 0;
    tn->add_option("--model", tn_model, "lr | dt | rf | xgb")->required();
    tn->add_option("--dataset", tn_data, "Dataset CSV")->required();
    tn->add_option("--folds", tn_folds, "Number of folds");
    tn->add_option("--iters", tn_iters, "Sampled parameter combinations");
    tn->add_option("--seed", tn_seed, "Master seed");
    tn->add_option("--scoring", tn_scoring, "roc_auc | ap");
    tn->add_option("--kind", tn_kind, "phishing | creditcard (detected from the label column by default)");
    tn->add_option("--out", tn_out, "Write the JSON result here instead of stdout");

    // fit
    auto* ft = app.add_subcommand("fit", "Run one experiment and print its report");
    ExperimentFlags ff;
    ft->add_option("--config", ff.config, "JSON experiment config");
    ft->add_option("--model", ff.model, "lr | dt | rf | xgb");
    ft->add_option("--resampler", ff.resampler, "orig | rus | smote | smoteenn");
    ft->add_option("--dataset", ff.dataset, "phishing | creditcard");
    ft->add_option("--data", ff.data, "Dataset CSV");
    ft->add_option("--seed", ff.seed, "Master seed");
    ft->add_option("--threshold", ff.threshold, "Decision threshold");
    ft->add_option("--params", ff.params, "Hyperparameters as JSON, or table3");
    ft->add_option("--smote-k", ff.smote_k, "SMOTE neighbours");
    ft->add_option("--enn-k", ff.enn_k, "ENN neighbours");
    ft->add_option("--out", ff.out, "Directory for the ROC/PR curve CSVs");

    // bench
    auto* bn = app.add_subcommand("bench", "Run the 16-experiment grid on one dataset");
    ExperimentFlags bf;
    bool bn_retune = false;
    bn->add_option("--config", bf.config, "JSON config");
    bn->add_option("--dataset", bf.dataset, "phishing | creditcard");
    bn->add_option("--data", bf.data, "Dataset CSV");
    bn->add_option("--seed", bf.seed, "Master seed");
    bn->add_option("--out", bf.out, "Output directory");
    bn->add_option("--threshold", bf.threshold, "Decision threshold");
    bn->add_flag("--retune", bn_retune, "Run randomized search before the grid");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rs->parsed()) {
            const std::string label = rs_label.empty() ? detect_label(rs_in) : rs_label;
            const Dataset in = load_csv(rs_in, label);
            const ResampleMethod method{parse_resample_kind(rs_method), rs_smote_k, rs_enn_k, rs_seed};
            const auto out = resample(in, method);
            write_csv(out.dataset, rs_out, label);
            std::cerr << "resample: " << in.rows() << " -> " << out.dataset.rows() << " rows ("
                      << out.dataset.negatives() << " negative, " << out.dataset.positives() << " positive, "
                      << out.synthetic_count() << " synthetic)\n";
            return 0;
        }

        if (tn->parsed()) {
            const std::string label = detect_label(tn_data);
            const DatasetId kind = !tn_kind.empty() ? parse_dataset_id(tn_kind)
                                   : label == "phishing" ? DatasetId::Phishing
                                                         : DatasetId::CreditCard;
            const Dataset raw = load_csv(tn_data, dataset_profile(kind).label_column);
            const PreparedData data = prepare_data(raw, kind, tn_seed);
            const ModelFamily fam = parse_model_family(tn_model);
            const auto result = randomized_search(fam, default_grid(fam), data.train, tn_folds, tn_iters,
                                                  SeedPlan::from_master(tn_seed).tune, parse_scoring(tn_scoring));
            const std::string text = result.to_json().dump(2) + "\n";
            if (tn_out.empty()) std::cout << text;
            else std::ofstream(tn_out) << text;
            return 0;
        }

        if (ft->parsed()) {
            nlohmann::json cfg;
            const ExperimentSpec spec = build_spec(*ft, ff, cfg);
            if (!cfg.contains("data")) throw std::runtime_error("fit: --data (or \"data\" in the config) is required");
            const ExperimentReport report = run_experiment(spec, cfg.at("data").get<std::string>());
            if (cfg.contains("out")) {
                GridResult single;
                single.reports.push_back(report);
                emit_report(single, cfg.at("out").get<std::string>(), {{"command", "fit"}});
            }
            std::cout << to_json(report).dump(2) << "\n";
            return 0;
        }

        if (bn->parsed()) {
            nlohmann::json cfg;
            const ExperimentSpec spec = build_spec(*bn, bf, cfg);
            if (!cfg.contains("data") || !cfg.contains("out"))
                throw std::runtime_error("bench: --data and --out are required");
            if (!cfg.contains("dataset")) throw std::runtime_error("bench: --dataset is required");
            GridOptions opts;
            opts.retune = bn_retune || cfg.value("retune", false);
            opts.threshold = spec.threshold;
            const std::string data_path = cfg.at("data").get<std::string>();
            const Dataset raw = load_csv(data_path, dataset_profile(spec.dataset).label_column);
            std::cerr << "bench: " << to_string(spec.dataset) << " " << raw.rows() << " rows, "
                      << raw.positives() << " positive\n";
            const GridResult grid = run_grid(raw, spec.dataset, spec.seed, opts);
            const auto files = emit_report(grid, cfg.at("out").get<std::string>(),
                                           {{"command", "bench"},
                                            {"data", data_path},
                                            {"seed", spec.seed},
                                            {"retune", opts.retune},
                                            {"threshold", opts.threshold}});
            for (const auto& r : grid.reports) {
                std::cerr << "  " << to_string(r.spec.model) << "+" << to_string(r.spec.resampler) << ": ";
                if (r.ok())
                    std::cerr << "auc_roc=" << r.auc_roc << " auc_pr=" << r.auc_pr << " fp=" << r.cm.fp
                              << " fn=" << r.cm.fn << " (" << r.wall_seconds << " s)\n";
                else
                    std::cerr << "FAILED " << r.error << "\n";
            }
            std::cerr << "wrote " << files.csv << ", " << files.json << ", " << files.curves.size() << " curves\n";
            return grid.all_ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
