#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"
#include "fraudkit/tree.hpp"

namespace fraudkit {

/// How the positive-class weight is chosen at fit time.
enum class PosWeightMode {
    Fixed,      // use BoostConfig::scale_pos_weight
    Ratio,      // n_negative / n_positive of the training data
    SqrtRatio,  // sqrt(n_negative / n_positive)
};

struct BoostConfig {
    int n_estimators = 100;
    int max_depth = 6;
    double learning_rate = 0.3;
    double gamma = 0.0;
    double lambda = 1.0;
    double colsample_bytree = 1.0;
    double scale_pos_weight = 1.0;
    PosWeightMode pos_weight_mode = PosWeightMode::Fixed;
    std::uint64_t seed = 0;
};

struct BoostModel {
    std::vector<Tree> trees;  // leaf values already include the learning rate
    double base_margin = 0.0;
    double scale_pos_weight = 1.0;  // value used during fitting
    BoostConfig config;
};

struct GradHess {
    double g, h;
};

/// Logistic-loss derivatives at probability p; positives are scaled by spw.
GradHess grad_hess(Label y, double p, double spw);

/// Optimal leaf weight -G/(H+lambda).
double leaf_weight(double g_sum, double h_sum, double lambda);

/// Second-order loss reduction of splitting a leaf into (L,R), minus gamma.
double split_gain(double gl, double hl, double gr, double hr, double lambda, double gamma);

/// scale_pos_weight implied by the config and the class counts of `ds`.
double resolve_scale_pos_weight(const BoostConfig& cfg, const Dataset& ds);

/// When `loss_trace` is given it receives the mean (unweighted) training log-loss
/// before the first round and after every round.
BoostModel xgb_fit(const Dataset& ds, const BoostConfig& cfg, std::vector<double>* loss_trace = nullptr);

double xgb_margin(const BoostModel& model, std::span<const double> x);
double xgb_predict_proba(const BoostModel& model, std::span<const double> x);

}  // namespace fraudkit
