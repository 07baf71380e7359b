#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

struct LogisticModel {
    std::vector<double> w;
    double b = 0.0;
};

struct LrConfig {
    double c = 1.0;  // inverse regularization strength
    int max_iter = 100;
    double tol = 1e-6;  // on the gradient infinity-norm
    std::uint64_t seed = 0;
};

/// Logistic function, clamped into the open interval (0,1).
double sigmoid(double z);

double lr_predict_proba(const LogisticModel& model, std::span<const double> x);

/// J(w,b) = 1/2 |w|^2 + C * sum_i logloss(y_i, sigmoid(w.x_i + b)) and its gradient.
/// The gradient is laid out as (w_0..w_{m-1}, b).
struct LrObjective {
    double value;
    std::vector<double> gradient;
};

LrObjective lr_objective(const Dataset& ds, double c, std::span<const double> w, double b);

/// Minimizes J with L-BFGS and Armijo backtracking, starting at w=0, b=0.
/// When `trace` is given it receives J at the start and after every iteration.
LogisticModel lr_fit(const Dataset& ds, const LrConfig& cfg, std::vector<double>* trace = nullptr);

}  // namespace fraudkit
