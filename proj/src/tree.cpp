#include "fraudkit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fraudkit/rng.hpp"
#include "grower.hpp"

namespace fraudkit {

const TreeNode& Tree::leaf_for(std::span<const double> x) const {
    if (nodes.empty()) throw std::logic_error("empty tree");
    const TreeNode* node = &nodes[0];
    while (!node->is_leaf()) {
        const auto f = static_cast<std::size_t>(node->feature);
        node = &nodes[static_cast<std::size_t>(x[f] <= node->threshold ? node->left : node->right)];
    }
    return *node;
}

std::size_t Tree::depth() const {
    if (nodes.empty()) return 0;
    auto rec = [&](auto&& self, int id) -> std::size_t {
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        if (n.is_leaf()) return 0;
        return 1 + std::max(self(self, n.left), self(self, n.right));
    };
    return rec(rec, 0);
}

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double entropy(double p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("entropy: p1 must lie in [0,1]");
    auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    return term(p1) + term(1.0 - p1);
}

namespace {

constexpr double kGainEps = 1e-12;

double entropy_of_counts(double pos, double total) { return total > 0 ? entropy(pos / total) : 0.0; }

double entropy_gain(double pos, double total, double pos_l, double total_l, double pos_r, double total_r) {
    return entropy_of_counts(pos, total) -
           (total_l * entropy_of_counts(pos_l, total_l) + total_r * entropy_of_counts(pos_r, total_r)) / total;
}

double positives(std::span<const Label> y) { return static_cast<double>(std::count(y.begin(), y.end(), Label{1})); }

struct EntropyCriterion {
    struct Stats {
        double total = 0.0, pos = 0.0;
        Stats& operator+=(const Stats& o) {
            total += o.total;
            pos += o.pos;
            return *this;
        }
        Stats operator-(const Stats& o) const { return {total - o.total, pos - o.pos}; }
    };

    const Dataset& ds;

    Stats row_stats(std::uint32_t r, std::uint32_t w) const {
        return {static_cast<double>(w), ds.label(r) ? static_cast<double>(w) : 0.0};
    }
    double count(const Stats& s) const { return s.total; }
    bool pure(const Stats& s) const { return s.pos == 0.0 || s.pos == s.total; }
    double gain(const Stats& p, const Stats& l, const Stats& r) const {
        return entropy_gain(p.pos, p.total, l.pos, l.total, r.pos, r.total);
    }
    // Impure nodes are split even when the best gain is zero (e.g. XOR layouts),
    // so fully grown trees reach every separable leaf.
    bool accept(double g) const { return g > -kGainEps; }
    double leaf_value(const Stats& s) const { return s.total > 0 ? s.pos / s.total : 0.0; }
};

std::vector<std::size_t> all_features(std::size_t m) {
    std::vector<std::size_t> f(m);
    std::iota(f.begin(), f.end(), std::size_t{0});
    return f;
}

}  // namespace

double information_gain(std::span<const Label> parent, std::span<const Label> left, std::span<const Label> right) {
    if (parent.empty()) throw std::invalid_argument("information_gain: empty parent");
    if (left.size() + right.size() != parent.size())
        throw std::invalid_argument("information_gain: children do not partition the parent");
    return entropy_gain(positives(parent), static_cast<double>(parent.size()), positives(left),
                        static_cast<double>(left.size()), positives(right), static_cast<double>(right.size()));
}

std::optional<Split> best_split(const Dataset& ds, std::span<const std::size_t> rows,
                                std::span<const std::size_t> features) {
    std::optional<Split> best;
    if (rows.empty()) return best;
    const double total = static_cast<double>(rows.size());
    double pos = 0.0;
    for (std::size_t r : rows) pos += ds.label(r);

    std::vector<std::size_t> feats(features.begin(), features.end());
    std::sort(feats.begin(), feats.end());
    std::vector<std::size_t> order(rows.begin(), rows.end());
    for (std::size_t f : feats) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ds.at(a, f) < ds.at(b, f); });
        double pos_l = 0.0;
        for (std::size_t p = 0; p + 1 < order.size(); ++p) {
            pos_l += ds.label(order[p]);
            const double x = ds.at(order[p], f), x_next = ds.at(order[p + 1], f);
            if (x == x_next) continue;
            const double n_l = static_cast<double>(p + 1);
            const double g = entropy_gain(pos, total, pos_l, n_l, pos - pos_l, total - n_l);
            if (g > kGainEps && (!best || g > best->gain)) best = Split{f, detail::midpoint(x, x_next), g};
        }
    }
    return best;
}

DecisionTree dt_fit(const Dataset& ds, const DtConfig& cfg, std::span<const std::uint32_t> multiplicity) {
    if (cfg.min_samples_split < 2) throw std::invalid_argument("dt_fit: min_samples_split must be >= 2");
    if (!multiplicity.empty() && multiplicity.size() != ds.rows())
        throw std::invalid_argument("dt_fit: multiplicity length must equal row count");
    const detail::ColumnStore cols = detail::make_column_store(ds);
    const EntropyCriterion crit{ds};
    const auto features = all_features(ds.cols());
    detail::TreeGrower<EntropyCriterion> grower(cols, crit, multiplicity, features,
                                                {cfg.max_depth, static_cast<double>(cfg.min_samples_split)});
    return grower.grow([&] { return features; });
}

double dt_predict_proba(const DecisionTree& tree, std::span<const double> x) { return tree.predict(x); }

void rf_grow(ForestModel& forest, const Dataset& ds, const RfConfig& cfg) {
    if (cfg.n_estimators < 1) throw std::invalid_argument("rf: n_estimators must be >= 1");
    if (cfg.min_samples_split < 2) throw std::invalid_argument("rf: min_samples_split must be >= 2");
    if (ds.rows() < 2 || ds.positives() == 0 || ds.negatives() == 0)
        throw std::invalid_argument("rf: need at least 2 rows with both classes present");
    const std::size_t n = ds.rows();
    if (forest.oob_trees.empty()) {
        forest.oob_trees.assign(n, 0);
        forest.oob_positive_votes.assign(n, 0);
    } else if (forest.oob_trees.size() != n) {
        throw std::invalid_argument("rf: warm start requires the original training data");
    }
    forest.config = cfg;

    const std::size_t target = static_cast<std::size_t>(cfg.n_estimators);
    if (forest.trees.size() < target) {
        const detail::ColumnStore cols = detail::make_column_store(ds);
        const EntropyCriterion crit{ds};
        const std::size_t m = ds.cols();
        const auto features = all_features(m);
        const auto mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
        std::vector<std::uint32_t> weight(n);

        for (std::size_t t = forest.trees.size(); t < target; ++t) {
            Rng rng = make_rng(derive_seed(cfg.seed, t));
            std::fill(weight.begin(), weight.end(), 0u);
            std::uniform_int_distribution<std::size_t> draw(0, n - 1);
            for (std::size_t s = 0; s < n; ++s) ++weight[draw(rng)];

            detail::TreeGrower<EntropyCriterion> grower(cols, crit, weight, features,
                                                        {cfg.max_depth, static_cast<double>(cfg.min_samples_split)});
            std::vector<std::size_t> pool = features;
            Tree tree = grower.grow([&] {
                // Partial Fisher-Yates: first mtry entries become the subset.
                for (std::size_t i = 0; i < mtry && i < m; ++i) {
                    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
                    std::swap(pool[i], pool[pick(rng)]);
                }
                std::vector<std::size_t> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(std::min(mtry, m)));
                std::sort(subset.begin(), subset.end());
                return subset;
            });
            for (std::size_t i = 0; i < n; ++i) {
                if (weight[i] != 0) continue;
                ++forest.oob_trees[i];
                forest.oob_positive_votes[i] += tree_vote(tree, ds.row(i));
            }
            forest.trees.push_back(std::move(tree));
        }
    }

    forest.oob_score.reset();
    forest.oob_incomplete = false;
    if (cfg.oob_score) {
        std::size_t covered = 0, correct = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (forest.oob_trees[i] == 0) continue;
            ++covered;
            const bool pred = 2 * forest.oob_positive_votes[i] > forest.oob_trees[i];
            correct += pred == (ds.label(i) != 0);
        }
        forest.oob_incomplete = covered < n;
        if (covered > 0) forest.oob_score = static_cast<double>(correct) / static_cast<double>(covered);
    }
}

ForestModel rf_fit(const Dataset& ds, const RfConfig& cfg) {
    ForestModel forest;
    rf_grow(forest, ds, cfg);
    return forest;
}

double rf_predict_proba(const ForestModel& forest, std::span<const double> x) {
    if (forest.trees.empty()) throw std::invalid_argument("rf_predict_proba: empty forest");
    std::size_t votes = 0;
    for (const auto& t : forest.trees) votes += tree_vote(t, x);
    return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

}  // namespace fraudkit
