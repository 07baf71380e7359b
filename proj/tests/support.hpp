#pragma once

// Fixture generators and independent oracles shared by the unit and acceptance
// suites. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit::testing {

inline std::vector<std::string> column_names(std::size_t m, const std::string& prefix = "f") {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j) names.push_back(prefix + std::to_string(j));
    return names;
}

/// Two Gaussian blobs; positives centred at `shift` in every coordinate.
inline Dataset make_blobs(std::size_t n_neg, std::size_t n_pos, std::size_t dim, double shift, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> f;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n_neg + n_pos; ++i) {
        const bool pos = i >= n_neg;
        for (std::size_t j = 0; j < dim; ++j) f.push_back(normal(rng) + (pos ? shift : 0.0));
        y.push_back(pos ? 1 : 0);
    }
    return Dataset(std::move(f), std::move(y), column_names(dim));
}

/// Uniform points in [0,scale)^dim with random labels of the given prevalence.
inline Dataset make_uniform(std::size_t n, std::size_t dim, double prevalence, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    std::bernoulli_distribution b(prevalence);
    std::vector<double> f;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < dim; ++j) f.push_back(u(rng));
        y.push_back(b(rng) ? 1 : 0);
    }
    return Dataset(std::move(f), std::move(y), column_names(dim));
}

/// Credit-card-shaped surrogate: Time, V1..V28, Amount with label column "Class".
inline Dataset make_creditcard_like(std::size_t n_neg, std::size_t n_pos, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> amount(1.0 / 80.0);
    std::uniform_real_distribution<double> time(0.0, 172800.0);
    std::vector<std::string> names{"Time"};
    for (int v = 1; v <= 28; ++v) names.push_back("V" + std::to_string(v));
    names.push_back("Amount");
    std::vector<double> f;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n_neg + n_pos; ++i) {
        const bool pos = i >= n_neg;
        f.push_back(time(rng));
        for (int v = 1; v <= 28; ++v) {
            const double scale = 3.0 / v + 0.3;
            double shift = 0.0;
            if (pos && v <= 12) shift = (v % 2 ? -2.5 : 2.0) * scale;
            f.push_back(scale * normal(rng) + shift);
        }
        f.push_back(amount(rng) * (pos ? 1.5 : 1.0));
        y.push_back(pos ? 1 : 0);
    }
    return Dataset(std::move(f), std::move(y), names);
}

// ---------------------------------------------------------------- oracles

/// P(s+ > s-) + 1/2 P(s+ = s-) over every positive/negative pair.
inline double pairwise_auc(const std::vector<double>& s, const std::vector<Label>& y) {
    double wins = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!y[i]) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j]) continue;
            pairs += 1.0;
            if (s[i] > s[j]) wins += 1.0;
            else if (s[i] == s[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

/// Average precision by enumerating every distinct threshold and recounting from scratch.
inline double enumerated_ap(const std::vector<double>& s, const std::vector<Label>& y) {
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    const double pos = static_cast<double>(std::count(y.begin(), y.end(), Label{1}));
    double ap = 0.0, prev_recall = 0.0;
    for (double t : thresholds) {
        double tp = 0.0, predicted = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= t) {
                predicted += 1.0;
                tp += y[i];
            }
        }
        const double r = tp / pos;
        ap += (r - prev_recall) * (tp / predicted);
        prev_recall = r;
    }
    return ap;
}

/// k nearest rows of `i` among `candidates` (excluding i), ordered by (distance, index).
inline std::vector<std::size_t> brute_knn(const Dataset& ds, std::size_t i, std::size_t k,
                                          const std::vector<std::size_t>& candidates) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j : candidates) {
        if (j == i) continue;
        double s = 0.0;
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            const double diff = ds.at(i, c) - ds.at(j, c);
            s += diff * diff;
        }
        d.emplace_back(s, j);
    }
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < std::min(k, d.size()); ++q) out.push_back(d[q].second);
    return out;
}

/// Rows ENN keeps: label agrees with at least half of the k nearest neighbours.
inline std::vector<std::size_t> brute_enn_keep(const Dataset& ds, std::size_t k) {
    std::vector<std::size_t> all(ds.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        std::size_t disagree = 0;
        for (std::size_t j : brute_knn(ds, i, k, all)) disagree += ds.label(j) != ds.label(i);
        if (2 * disagree <= k) keep.push_back(i);
    }
    return keep;
}

/// Binary entropy straight from the definition.
inline double ref_entropy(double p) {
    double h = 0.0;
    if (p > 0) h -= p * std::log2(p);
    if (p < 1) h -= (1 - p) * std::log2(1 - p);
    return h;
}

struct RefSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

/// Best entropy split over `rows` by trying every feature and every midpoint directly.
inline RefSplit brute_best_split(const Dataset& ds, const std::vector<std::size_t>& rows) {
    auto h_of = [&](const std::vector<std::size_t>& r) {
        double pos = 0;
        for (std::size_t i : r) pos += ds.label(i);
        return r.empty() ? 0.0 : ref_entropy(pos / static_cast<double>(r.size()));
    };
    const double parent = h_of(rows);
    RefSplit best;
    best.gain = -1.0;
    for (std::size_t f = 0; f < ds.cols(); ++f) {
        std::vector<double> vals;
        for (std::size_t i : rows) vals.push_back(ds.at(i, f));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t v = 0; v + 1 < vals.size(); ++v) {
            const double t = (vals[v] + vals[v + 1]) / 2;
            std::vector<std::size_t> l, r;
            for (std::size_t i : rows) (ds.at(i, f) <= t ? l : r).push_back(i);
            const double n = static_cast<double>(rows.size());
            const double g = parent - (static_cast<double>(l.size()) / n) * h_of(l) -
                             (static_cast<double>(r.size()) / n) * h_of(r);
            if (g > best.gain + 1e-12) best = {static_cast<int>(f), t, g};
        }
    }
    return best;
}

}  // namespace fraudkit::testing
