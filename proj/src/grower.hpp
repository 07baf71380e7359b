#pragma once

// Shared greedy tree builder for the entropy trees and the boosted trees.
//
// Rows carry integer multiplicities (bootstrap copies collapse into one row with
// weight > 1). Each feature keeps a row list sorted by value; splitting a node
// stable-partitions those lists so children stay sorted without re-sorting.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"
#include "fraudkit/tree.hpp"

namespace fraudkit::detail {

struct ColumnStore {
    std::size_t n = 0, m = 0;
    std::vector<double> values;                  // column-major
    std::vector<std::vector<std::uint32_t>> order;  // per feature, rows sorted by value then index

    double value(std::size_t row, std::size_t f) const { return values[f * n + row]; }
};

inline ColumnStore make_column_store(const Dataset& ds) {
    ColumnStore cs;
    cs.n = ds.rows();
    cs.m = ds.cols();
    cs.values.resize(cs.n * cs.m);
    for (std::size_t i = 0; i < cs.n; ++i)
        for (std::size_t f = 0; f < cs.m; ++f) cs.values[f * cs.n + i] = ds.at(i, f);
    cs.order.resize(cs.m);
    for (std::size_t f = 0; f < cs.m; ++f) {
        auto& ord = cs.order[f];
        ord.resize(cs.n);
        std::iota(ord.begin(), ord.end(), std::uint32_t{0});
        const double* col = cs.values.data() + f * cs.n;
        std::stable_sort(ord.begin(), ord.end(), [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
    return cs;
}

/// Midpoint threshold that keeps `lo` on the left and `hi` on the right.
inline double midpoint(double lo, double hi) {
    const double mid = (lo + hi) / 2;
    return mid < hi ? mid : lo;
}

struct GrowLimits {
    int max_depth = kUnlimitedDepth;
    double min_samples_split = 2.0;
};

template <class Criterion>
class TreeGrower {
public:
    using Stats = typename Criterion::Stats;

    TreeGrower(const ColumnStore& cols, const Criterion& crit, std::span<const std::uint32_t> weight,
               std::vector<std::size_t> active_features, GrowLimits limits)
        : cols_(cols), crit_(crit), weight_(weight), active_(std::move(active_features)), limits_(limits) {
        slot_.assign(cols_.m, -1);
        for (std::size_t a = 0; a < active_.size(); ++a) slot_[active_[a]] = static_cast<int>(a);
        sorted_.resize(active_.size());
        for (std::size_t a = 0; a < active_.size(); ++a) {
            auto& dst = sorted_[a];
            dst.reserve(cols_.n);
            for (std::uint32_t r : cols_.order[active_[a]])
                if (w(r) > 0) dst.push_back(r);
        }
        if (active_.empty()) {
            for (std::uint32_t r = 0; r < cols_.n; ++r)
                if (w(r) > 0) rows_only_.push_back(r);
        }
        goes_left_.assign(cols_.n, 0);
        row_leaf_.assign(cols_.n, -1);
    }

    /// `sample` is called once per splittable node and returns a sorted subset of the active features.
    template <class Sampler>
    Tree grow(Sampler&& sample) {
        Tree tree;
        const std::size_t total = active_.empty() ? rows_only_.size() : sorted_[0].size();
        if (total > 0) build(tree, 0, total, 0, sample);
        return tree;
    }

    /// Leaf node index per row after grow(); -1 for rows with zero weight.
    const std::vector<int>& row_leaf() const { return row_leaf_; }

private:
    std::uint32_t w(std::uint32_t r) const { return weight_.empty() ? 1u : weight_[r]; }

    std::span<const std::uint32_t> range(std::size_t begin, std::size_t end) const {
        const auto& v = active_.empty() ? rows_only_ : sorted_[0];
        return {v.data() + begin, end - begin};
    }

    Stats sum_stats(std::span<const std::uint32_t> rows) const {
        Stats s{};
        for (std::uint32_t r : rows) s += crit_.row_stats(r, w(r));
        return s;
    }

    struct Candidate {
        int feature = -1;
        double threshold = 0.0;
        double gain = -std::numeric_limits<double>::infinity();
    };

    template <class Sampler>
    int build(Tree& tree, std::size_t begin, std::size_t end, int depth, Sampler& sample) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const auto rows = range(begin, end);
        const Stats parent = sum_stats(rows);
        const double count = crit_.count(parent);

        Candidate best;
        const bool can_split = !active_.empty() && (limits_.max_depth < 0 || depth < limits_.max_depth) &&
                               count >= limits_.min_samples_split && !crit_.pure(parent);
        if (can_split) {
            for (std::size_t f : sample()) find_split(f, begin, end, parent, best);
        }
        if (best.feature < 0 || !crit_.accept(best.gain)) {
            TreeNode& leaf = tree.nodes[static_cast<std::size_t>(id)];
            leaf.value = crit_.leaf_value(parent);
            leaf.samples = count;
            for (std::uint32_t r : rows) row_leaf_[r] = id;
            return id;
        }

        const std::size_t n_left = partition(static_cast<std::size_t>(best.feature), best.threshold, begin, end);
        const int left = build(tree, begin, begin + n_left, depth + 1, sample);
        const int right = build(tree, begin + n_left, end, depth + 1, sample);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left;
        node.right = right;
        node.samples = count;
        node.gain = best.gain;
        return id;
    }

    void find_split(std::size_t f, std::size_t begin, std::size_t end, const Stats& parent, Candidate& best) const {
        const auto& v = sorted_[static_cast<std::size_t>(slot_[f])];
        Stats left{};
        for (std::size_t p = begin; p + 1 < end; ++p) {
            const std::uint32_t r = v[p];
            left += crit_.row_stats(r, w(r));
            const double x = cols_.value(r, f);
            const double x_next = cols_.value(v[p + 1], f);
            if (x_next == x) continue;
            const Stats right = parent - left;
            const double g = crit_.gain(parent, left, right);
            if (g > best.gain) {
                best.feature = static_cast<int>(f);
                best.threshold = midpoint(x, x_next);
                best.gain = g;
            }
        }
    }

    std::size_t partition(std::size_t f, double threshold, std::size_t begin, std::size_t end) {
        std::size_t n_left = 0;
        for (std::uint32_t r : range(begin, end)) {
            goes_left_[r] = cols_.value(r, f) <= threshold;
            n_left += goes_left_[r];
        }
        for (auto& v : sorted_) {
            buffer_.clear();
            std::size_t out = begin;
            for (std::size_t p = begin; p < end; ++p) {
                if (goes_left_[v[p]]) v[out++] = v[p];
                else buffer_.push_back(v[p]);
            }
            std::copy(buffer_.begin(), buffer_.end(), v.begin() + static_cast<std::ptrdiff_t>(out));
        }
        return n_left;
    }

    const ColumnStore& cols_;
    const Criterion& crit_;
    std::span<const std::uint32_t> weight_;
    std::vector<std::size_t> active_;
    GrowLimits limits_;
    std::vector<int> slot_;
    std::vector<std::vector<std::uint32_t>> sorted_;
    std::vector<std::uint32_t> rows_only_;
    std::vector<std::uint8_t> goes_left_;
    std::vector<std::uint32_t> buffer_;
    std::vector<int> row_leaf_;
};

}  // namespace fraudkit::detail
