#include "fraudkit/linear.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <numeric>

namespace fraudkit {

namespace {

constexpr double kProbHi = 1.0 - DBL_EPSILON / 2;

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double raw_sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

double sigmoid(double z) { return std::clamp(raw_sigmoid(z), DBL_MIN, kProbHi); }

double lr_predict_proba(const LogisticModel& model, std::span<const double> x) {
    if (x.size() != model.w.size()) throw std::invalid_argument("lr_predict_proba: dimension mismatch");
    return sigmoid(dot(model.w, x) + model.b);
}

LrObjective lr_objective(const Dataset& ds, double c, std::span<const double> w, double b) {
    const std::size_t m = ds.cols();
    if (w.size() != m) throw std::invalid_argument("lr_objective: dimension mismatch");
    LrObjective out{0.5 * dot(w, w), std::vector<double>(m + 1, 0.0)};
    std::copy(w.begin(), w.end(), out.gradient.begin());
    double loss = 0.0;
    std::vector<double> gsum(m + 1, 0.0);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const auto x = ds.row(i);
        const double z = dot(w, x) + b;
        const bool y = ds.label(i) != 0;
        loss += softplus(y ? -z : z);
        const double r = raw_sigmoid(z) - (y ? 1.0 : 0.0);
        for (std::size_t j = 0; j < m; ++j) gsum[j] += r * x[j];
        gsum[m] += r;
    }
    out.value += c * loss;
    for (std::size_t j = 0; j <= m; ++j) out.gradient[j] += c * gsum[j];
    return out;
}

LogisticModel lr_fit(const Dataset& ds, const LrConfig& cfg, std::vector<double>* trace) {
    if (!(cfg.c > 0)) throw std::invalid_argument("lr_fit: C must be positive");
    if (ds.positives() == 0 || ds.negatives() == 0)
        throw std::invalid_argument("lr_fit: training data must contain both classes");

    const std::size_t m = ds.cols();
    const std::size_t d = m + 1;
    std::vector<double> theta(d, 0.0);
    auto eval = [&](const std::vector<double>& t) {
        return lr_objective(ds, cfg.c, std::span<const double>(t.data(), m), t[m]);
    };

    LrObjective cur = eval(theta);
    if (trace) trace->assign(1, cur.value);

    constexpr std::size_t kHistory = 10;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(d), next(d);

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (inf_norm(cur.gradient) < cfg.tol) break;

        // Two-loop recursion for the quasi-Newton direction.
        dir = cur.gradient;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t h = s_hist.size(); h-- > 0;) {
            alpha[h] = rho_hist[h] * dot(s_hist[h], dir);
            for (std::size_t j = 0; j < d; ++j) dir[j] -= alpha[h] * y_hist[h][j];
        }
        double scale = 1.0;
        if (!s_hist.empty()) scale = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        else scale = 1.0 / std::max(1.0, inf_norm(cur.gradient));
        for (double& v : dir) v *= scale;
        for (std::size_t h = 0; h < s_hist.size(); ++h) {
            const double beta = rho_hist[h] * dot(y_hist[h], dir);
            for (std::size_t j = 0; j < d; ++j) dir[j] += s_hist[h][j] * (alpha[h] - beta);
        }
        for (double& v : dir) v = -v;

        double slope = dot(cur.gradient, dir);
        if (!(slope < 0)) {
            // Not a descent direction; fall back to steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            const double sc = 1.0 / std::max(1.0, inf_norm(cur.gradient));
            for (std::size_t j = 0; j < d; ++j) dir[j] = -sc * cur.gradient[j];
            slope = dot(cur.gradient, dir);
        }

        double step = 1.0;
        LrObjective trial{};
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t j = 0; j < d; ++j) next[j] = theta[j] + step * dir[j];
            trial = eval(next);
            if (std::isfinite(trial.value) && trial.value <= cur.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> s(d), y(d);
        for (std::size_t j = 0; j < d; ++j) {
            s[j] = next[j] - theta[j];
            y[j] = trial.gradient[j] - cur.gradient[j];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (s_hist.size() > kHistory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        theta.swap(next);
        cur = std::move(trial);
        if (trace) trace->push_back(cur.value);
    }

    LogisticModel model;
    model.w.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(m));
    model.b = theta[m];
    return model;
}

}  // namespace fraudkit
