#include "fraudkit/tune.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_set>

#include "fraudkit/metrics.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

std::string to_string(Scoring s) { return s == Scoring::RocAuc ? "roc_auc" : "ap"; }

Scoring parse_scoring(const std::string& name) {
    if (name == "roc_auc") return Scoring::RocAuc;
    if (name == "ap" || name == "average_precision") return Scoring::AveragePrecision;
    throw ParamError("unknown scoring metric '" + name + "'");
}

double score_predictions(Scoring s, std::span<const double> scores, std::span<const Label> labels) {
    ScoredPredictions p{{scores.begin(), scores.end()}, {labels.begin(), labels.end()}};
    return s == Scoring::RocAuc ? roc_auc(p) : average_precision(p);
}

std::size_t grid_size(const ParamGrid& grid) {
    std::size_t total = 1;
    for (const auto& [name, values] : grid) {
        if (values.empty()) throw ParamError("parameter '" + name + "' has no candidate values");
        total *= values.size();
    }
    return total;
}

ParamSet grid_point(const ParamGrid& grid, std::size_t index) {
    if (index >= grid_size(grid)) throw ParamError("grid index out of range");
    ParamSet p = ParamSet::object();
    for (const auto& [name, values] : grid) {
        p[name] = values[index % values.size()];
        index /= values.size();
    }
    return p;
}

ParamGrid default_grid(ModelFamily family) {
    using J = nlohmann::json;
    const std::vector<J> depths{5, 11, 12, 15, 20, nullptr};
    switch (family) {
        case ModelFamily::LR: return {{"C", {0.1, 1.0, 3.0, 5.0, 10.0}}, {"max_iter", {100, 500}}};
        case ModelFamily::DT: return {{"max_depth", depths}, {"min_samples_split", {2, 5, 10}}};
        case ModelFamily::RF:
            return {{"n_estimators", {50, 100, 200}},
                    {"max_depth", depths},
                    {"oob_score", {true}},
                    {"warm_start", {true}}};
        case ModelFamily::XGB:
            return {{"n_estimators", {50, 100, 200}},
                    {"max_depth", {5, 11, 12, 15, 20}},
                    {"learning_rate", {0.05, 0.1, 0.3}},
                    {"gamma", {0.0, 0.3, 1.0}},
                    {"colsample_bytree", {0.7, 0.9, 1.0}},
                    {"scale_pos_weight", {J(1.0), J("sqrt_ratio"), J("ratio")}}};
    }
    return {};
}

nlohmann::json SearchResult::to_json() const {
    nlohmann::json j;
    j["model"] = to_string(family);
    j["scoring"] = to_string(scoring);
    j["folds"] = folds;
    j["best_index"] = best_index;
    j["best_params"] = best_params;
    j["best_mean_score"] = candidates.empty() ? 0.0 : candidates[best_index].mean_score;
    j["elapsed_seconds"] = elapsed_seconds;
    auto& arr = j["candidates"] = nlohmann::json::array();
    for (const auto& c : candidates)
        arr.push_back({{"params", c.params}, {"mean_score", c.mean_score}, {"fold_scores", c.fold_scores}});
    return j;
}

SearchResult randomized_search(ModelFamily family, const ParamGrid& grid, const Dataset& train, std::size_t k,
                               std::size_t n_iter, std::uint64_t seed, Scoring scoring) {
    const auto start = std::chrono::steady_clock::now();
    if (grid.empty()) throw ParamError("empty parameter grid");
    if (n_iter == 0) throw ParamError("n_iter must be positive");
    const auto names = param_names(family);
    for (const auto& [name, values] : grid)
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw ParamError("unknown parameter '" + name + "' for model " + to_string(family));
    const std::size_t total = grid_size(grid);

    Rng rng = make_rng(derive_seed(seed, 0));
    std::vector<std::size_t> picks;
    const std::size_t want = std::min(n_iter, total);
    if (total <= 1'000'000) {
        std::vector<std::size_t> all(total);
        std::iota(all.begin(), all.end(), std::size_t{0});
        for (std::size_t i = 0; i < want; ++i) {
            std::uniform_int_distribution<std::size_t> d(i, total - 1);
            std::swap(all[i], all[d(rng)]);
        }
        picks.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(want));
    } else {
        std::unordered_set<std::size_t> seen;
        std::uniform_int_distribution<std::size_t> d(0, total - 1);
        while (picks.size() < want) {
            const std::size_t idx = d(rng);
            if (seen.insert(idx).second) picks.push_back(idx);
        }
    }

    const FoldSet folds = stratified_kfold(train, k, derive_seed(seed, 1));
    std::vector<std::vector<std::size_t>> fit_rows(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<bool> held(train.rows(), false);
        for (std::size_t i : folds[f]) held[i] = true;
        for (std::size_t i = 0; i < train.rows(); ++i)
            if (!held[i]) fit_rows[f].push_back(i);
        // Validation rows must never reach the fit.
        for (std::size_t i : fit_rows[f])
            if (held[i]) throw std::logic_error("fold leakage");
        if (fit_rows[f].size() + folds[f].size() != train.rows()) throw std::logic_error("fold does not cover data");
    }

    SearchResult result;
    result.family = family;
    result.scoring = scoring;
    result.folds = k;
    for (std::size_t c = 0; c < picks.size(); ++c) {
        CandidateResult cand;
        cand.params = grid_point(grid, picks[c]);
        validate_params(family, cand.params);
        for (std::size_t f = 0; f < k; ++f) {
            auto model = make_classifier(family, cand.params, derive_seed(seed, 100 + c));
            model->fit(train.subset(fit_rows[f]));
            const Dataset valid = train.subset(folds[f]);
            const auto scores = model->predict_proba(valid);
            cand.fold_scores.push_back(score_predictions(scoring, scores, valid.labels()));
        }
        cand.mean_score = std::accumulate(cand.fold_scores.begin(), cand.fold_scores.end(), 0.0) /
                          static_cast<double>(k);
        if (c == 0 || cand.mean_score > result.candidates[result.best_index].mean_score) result.best_index = c;
        result.candidates.push_back(std::move(cand));
    }
    result.best_params = result.candidates[result.best_index].params;
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace fraudkit
