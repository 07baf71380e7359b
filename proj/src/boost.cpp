#include "fraudkit/boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fraudkit/linear.hpp"
#include "fraudkit/rng.hpp"
#include "grower.hpp"

namespace fraudkit {

namespace {

constexpr double kProbClamp = 1e-15;

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

struct SecondOrderCriterion {
    struct Stats {
        double g = 0.0, h = 0.0, n = 0.0;
        Stats& operator+=(const Stats& o) {
            g += o.g;
            h += o.h;
            n += o.n;
            return *this;
        }
        Stats operator-(const Stats& o) const { return {g - o.g, h - o.h, n - o.n}; }
    };

    std::span<const double> grad, hess;
    double lambda, gamma, eta;

    Stats row_stats(std::uint32_t r, std::uint32_t) const { return {grad[r], hess[r], 1.0}; }
    double count(const Stats& s) const { return s.n; }
    bool pure(const Stats&) const { return false; }
    double gain(const Stats&, const Stats& l, const Stats& r) const {
        return split_gain(l.g, l.h, r.g, r.h, lambda, gamma);
    }
    bool accept(double g) const { return g > 0.0; }
    double leaf_value(const Stats& s) const { return eta * leaf_weight(s.g, s.h, lambda); }
};

double mean_log_loss(const Dataset& ds, std::span<const double> margin) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const double p = clamp_prob(sigmoid(margin[i]));
        sum -= ds.label(i) ? std::log(p) : std::log1p(-p);
    }
    return sum / static_cast<double>(ds.rows());
}

}  // namespace

GradHess grad_hess(Label y, double p, double spw) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("grad_hess: p must lie in (0,1)");
    double g = p - (y ? 1.0 : 0.0);
    double h = p * (1.0 - p);
    if (y) {
        g *= spw;
        h *= spw;
    }
    return {g, h};
}

double leaf_weight(double g_sum, double h_sum, double lambda) {
    if (!(h_sum + lambda > 0.0)) throw std::invalid_argument("leaf_weight: H + lambda must be positive");
    return -g_sum / (h_sum + lambda);
}

double split_gain(double gl, double hl, double gr, double hr, double lambda, double gamma) {
    const double g = gl + gr, h = hl + hr;
    return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda)) - gamma;
}

double resolve_scale_pos_weight(const BoostConfig& cfg, const Dataset& ds) {
    switch (cfg.pos_weight_mode) {
        case PosWeightMode::Fixed: return cfg.scale_pos_weight;
        case PosWeightMode::Ratio:
        case PosWeightMode::SqrtRatio: {
            const double pos = static_cast<double>(ds.positives());
            const double neg = static_cast<double>(ds.negatives());
            if (pos == 0) throw std::invalid_argument("scale_pos_weight: no positives");
            const double ratio = neg / pos;
            return cfg.pos_weight_mode == PosWeightMode::Ratio ? ratio : std::sqrt(ratio);
        }
    }
    return 1.0;
}

BoostModel xgb_fit(const Dataset& ds, const BoostConfig& cfg, std::vector<double>* loss_trace) {
    if (cfg.n_estimators < 0) throw std::invalid_argument("xgb_fit: n_estimators must be >= 0");
    if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
        throw std::invalid_argument("xgb_fit: learning_rate must lie in (0,1]");
    if (cfg.gamma < 0 || cfg.lambda < 0) throw std::invalid_argument("xgb_fit: gamma and lambda must be >= 0");
    if (!(cfg.colsample_bytree > 0.0 && cfg.colsample_bytree <= 1.0))
        throw std::invalid_argument("xgb_fit: colsample_bytree must lie in (0,1]");
    if (ds.positives() == 0 || ds.negatives() == 0)
        throw std::invalid_argument("xgb_fit: training data must contain both classes");

    const std::size_t n = ds.rows();
    const std::size_t m = ds.cols();
    BoostModel model;
    model.config = cfg;
    model.scale_pos_weight = resolve_scale_pos_weight(cfg, ds);
    if (model.scale_pos_weight < 0) throw std::invalid_argument("xgb_fit: scale_pos_weight must be >= 0");
    const double prevalence = static_cast<double>(ds.positives()) / static_cast<double>(n);
    model.base_margin = std::log(prevalence / (1.0 - prevalence));

    std::vector<double> margin(n, model.base_margin);
    if (loss_trace) loss_trace->assign(1, mean_log_loss(ds, margin));
    if (cfg.n_estimators == 0) return model;

    const detail::ColumnStore cols = detail::make_column_store(ds);
    const auto n_cols = std::max<std::size_t>(
        1, std::min(m, static_cast<std::size_t>(std::ceil(cfg.colsample_bytree * static_cast<double>(m) - 1e-9))));
    std::vector<double> grad(n), hess(n);
    std::vector<std::size_t> pool(m);

    for (int round = 0; round < cfg.n_estimators; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            const GradHess gh = grad_hess(ds.label(i), clamp_prob(sigmoid(margin[i])), model.scale_pos_weight);
            grad[i] = gh.g;
            hess[i] = gh.h;
        }

        Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(round)));
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<std::size_t> features(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_cols));
        std::sort(features.begin(), features.end());

        const SecondOrderCriterion crit{grad, hess, cfg.lambda, cfg.gamma, cfg.learning_rate};
        detail::TreeGrower<SecondOrderCriterion> grower(cols, crit, {}, features, {cfg.max_depth, 2.0});
        Tree tree = grower.grow([&] { return features; });
        const auto& leaf = grower.row_leaf();
        for (std::size_t i = 0; i < n; ++i) margin[i] += tree.nodes[static_cast<std::size_t>(leaf[i])].value;
        model.trees.push_back(std::move(tree));
        if (loss_trace) loss_trace->push_back(mean_log_loss(ds, margin));
    }
    return model;
}

double xgb_margin(const BoostModel& model, std::span<const double> x) {
    double z = model.base_margin;
    for (const auto& t : model.trees) z += t.predict(x);
    return z;
}

double xgb_predict_proba(const BoostModel& model, std::span<const double> x) { return sigmoid(xgb_margin(model, x)); }

}  // namespace fraudkit
