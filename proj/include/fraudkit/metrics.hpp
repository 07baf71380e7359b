#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ScoredPredictions {
    std::vector<double> scores;  // fraud probability per instance
    std::vector<Label> labels;

    std::size_t size() const { return scores.size(); }
};

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

/// A rate together with a flag set when its denominator was zero (value is then 0).
struct Rate {
    double value = 0.0;
    bool degenerate = false;

    operator double() const { return value; }
};

/// Predicted positive iff score > threshold.
ConfusionMatrix confusion_at(const ScoredPredictions& p, double threshold);

Rate recall(const ConfusionMatrix& cm);
Rate precision(const ConfusionMatrix& cm);
Rate fpr(const ConfusionMatrix& cm);

enum class CurveKind { ROC, PR };

struct CurvePoint {
    double x, y;
};

struct Curve {
    CurveKind kind;
    std::vector<CurvePoint> points;
};

/// ROC points from sweeping every distinct score, starting at (0,0) and ending at (1,1).
Curve roc_curve(const ScoredPredictions& p);
/// Trapezoidal area under roc_curve; ties in score contribute 1/2.
double roc_auc(const ScoredPredictions& p);

/// (recall, precision) at every distinct score threshold, highest score first.
Curve pr_curve(const ScoredPredictions& p);
/// Step-sum sum_n (R_n - R_{n-1}) P_n over pr_curve with R_0 = 0.
double average_precision(const ScoredPredictions& p);

/// Two-column "x,y" CSV.
std::string format_curve_csv(const Curve& c);
void write_curve_csv(const Curve& c, const std::string& path);

}  // namespace fraudkit
