#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

/// Internal nodes route x[feature] <= threshold to `left`. Leaves have feature < 0.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;     // leaf: positive fraction (classification) or weight (boosting)
    double samples = 0.0;   // weighted sample count reaching the node
    double gain = 0.0;      // internal: gain of the accepted split

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

/// Binary tree stored as a flat node array in depth-first order; node 0 is the root.
struct Tree {
    std::vector<TreeNode> nodes;

    const TreeNode& leaf_for(std::span<const double> x) const;
    double predict(std::span<const double> x) const { return leaf_for(x).value; }
    std::size_t depth() const;
    std::size_t leaf_count() const;
    bool operator==(const Tree&) const = default;
};

using DecisionTree = Tree;

constexpr int kUnlimitedDepth = -1;

/// Binary entropy in bits with 0*log2(0) = 0.
double entropy(double p1);

double information_gain(std::span<const Label> parent, std::span<const Label> left,
                        std::span<const Label> right);

struct Split {
    std::size_t feature;
    double threshold;
    double gain;
};

/// Exhaustive search over midpoints of consecutive distinct values of each listed
/// feature. Ties go to the lowest feature index, then the lowest threshold.
/// Returns nothing when no split has positive gain.
std::optional<Split> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                std::span<const std::size_t> features);

struct DtConfig {
    int max_depth = kUnlimitedDepth;
    int min_samples_split = 2;
    std::uint64_t seed = 0;
};

/// Entropy tree. `multiplicity`, when given, weights each row (0 drops it).
DecisionTree dt_fit(const Dataset& ds, const DtConfig& cfg, std::span<const std::uint32_t> multiplicity = {});
double dt_predict_proba(const DecisionTree& tree, std::span<const double> x);

struct RfConfig {
    int n_estimators = 100;
    int max_depth = kUnlimitedDepth;
    int min_samples_split = 2;
    bool oob_score = false;
    bool warm_start = false;
    std::uint64_t seed = 0;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::optional<double> oob_score;
    bool oob_incomplete = false;  // some rows were in-bag for every tree
    RfConfig config;

    // Per training row: number of trees for which it was out-of-bag, and how many of those voted 1.
    std::vector<std::uint32_t> oob_trees;
    std::vector<std::uint32_t> oob_positive_votes;
};

ForestModel rf_fit(const Dataset& ds, const RfConfig& cfg);
/// Appends trees until `forest` holds cfg.n_estimators; existing trees are untouched.
/// `ds` must be the data the forest was started on.
void rf_grow(ForestModel& forest, const Dataset& ds, const RfConfig& cfg);
double rf_predict_proba(const ForestModel& forest, std::span<const double> x);

/// Hard vote of one tree: leaf positive fraction > 0.5.
inline bool tree_vote(const DecisionTree& tree, std::span<const double> x) {
    return tree.predict(x) > 0.5;
}

}  // namespace fraudkit
