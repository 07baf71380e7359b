#include "fraudkit/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

namespace fraudkit {

namespace {

void check_sizes(const ScoredPredictions& p) {
    if (p.scores.size() != p.labels.size()) throw MetricError("scores and labels differ in length");
}

Rate ratio(std::size_t num, std::size_t den) {
    if (den == 0) return {0.0, true};
    return {static_cast<double>(num) / static_cast<double>(den), false};
}

// Cumulative (tp, fp) after each group of tied scores, highest score first.
struct Step {
    std::size_t tp, fp;
};

std::vector<Step> threshold_steps(const ScoredPredictions& p) {
    std::vector<std::size_t> order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.scores[a] > p.scores[b]; });
    std::vector<Step> steps;
    std::size_t tp = 0, fp = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (p.labels[order[r]]) ++tp;
        else ++fp;
        if (r + 1 == order.size() || p.scores[order[r + 1]] != p.scores[order[r]]) steps.push_back({tp, fp});
    }
    return steps;
}

}  // namespace

ConfusionMatrix confusion_at(const ScoredPredictions& p, double threshold) {
    check_sizes(p);
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool pred = p.scores[i] > threshold;
        if (p.labels[i]) (pred ? cm.tp : cm.fn)++;
        else (pred ? cm.fp : cm.tn)++;
    }
    return cm;
}

Rate recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
Rate precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
Rate fpr(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }

Curve roc_curve(const ScoredPredictions& p) {
    check_sizes(p);
    const auto pos = static_cast<std::size_t>(std::count(p.labels.begin(), p.labels.end(), Label{1}));
    const std::size_t neg = p.size() - pos;
    if (pos == 0 || neg == 0) throw MetricError("ROC requires both classes");
    Curve c{CurveKind::ROC, {{0.0, 0.0}}};
    for (const Step& s : threshold_steps(p))
        c.points.push_back({static_cast<double>(s.fp) / static_cast<double>(neg),
                            static_cast<double>(s.tp) / static_cast<double>(pos)});
    return c;
}

double roc_auc(const ScoredPredictions& p) {
    const Curve c = roc_curve(p);
    double area = 0.0;
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const auto& a = c.points[i - 1];
        const auto& b = c.points[i];
        area += (b.x - a.x) * (a.y + b.y) * 0.5;
    }
    return area;
}

Curve pr_curve(const ScoredPredictions& p) {
    check_sizes(p);
    const auto pos = static_cast<std::size_t>(std::count(p.labels.begin(), p.labels.end(), Label{1}));
    if (pos == 0) throw MetricError("precision-recall requires at least one positive");
    Curve c{CurveKind::PR, {}};
    for (const Step& s : threshold_steps(p))
        c.points.push_back({static_cast<double>(s.tp) / static_cast<double>(pos),
                            static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp)});
    return c;
}

double average_precision(const ScoredPredictions& p) {
    const Curve c = pr_curve(p);
    double ap = 0.0;
    double prev_recall = 0.0;
    for (const auto& pt : c.points) {
        ap += (pt.x - prev_recall) * pt.y;
        prev_recall = pt.x;
    }
    return ap;
}

std::string format_curve_csv(const Curve& c) {
    std::string out = "x,y\n";
    char buf[64];
    for (const auto& pt : c.points) {
        out.append(buf, std::to_chars(buf, buf + sizeof buf, pt.x).ptr);
        out += ',';
        out.append(buf, std::to_chars(buf, buf + sizeof buf, pt.y).ptr);
        out += '\n';
    }
    return out;
}

void write_curve_csv(const Curve& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << format_curve_csv(c);
}

}  // namespace fraudkit
