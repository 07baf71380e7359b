#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fraudkit/dataset.hpp"
#include "fraudkit/models.hpp"

namespace fraudkit {

/// Candidate values per parameter name; each value is a JSON scalar.
using ParamGrid = std::map<std::string, std::vector<nlohmann::json>>;

enum class Scoring { RocAuc, AveragePrecision };

std::string to_string(Scoring s);
Scoring parse_scoring(const std::string& name);

/// Score of `scores` against `labels` under the chosen metric.
double score_predictions(Scoring s, std::span<const double> scores, std::span<const Label> labels);

struct CandidateResult {
    ParamSet params;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct SearchResult {
    ModelFamily family;
    ParamSet best_params;
    std::size_t best_index = 0;  // into candidates
    std::vector<CandidateResult> candidates;  // in sampling order
    Scoring scoring = Scoring::RocAuc;
    std::size_t folds = 0;
    double elapsed_seconds = 0.0;

    nlohmann::json to_json() const;
};

std::size_t grid_size(const ParamGrid& grid);
/// Mixed-radix decode over the grid's (sorted) parameter names.
ParamSet grid_point(const ParamGrid& grid, std::size_t index);

/// Search grids that bracket the reference optima for each family.
ParamGrid default_grid(ModelFamily family);

/// Samples min(n_iter, |grid|) distinct combinations uniformly and scores each by
/// stratified k-fold cross-validation; ties keep the earliest sampled candidate.
SearchResult randomized_search(ModelFamily family, const ParamGrid& grid, const Dataset& train, std::size_t k,
                               std::size_t n_iter, std::uint64_t seed, Scoring scoring = Scoring::RocAuc);

}  // namespace fraudkit
