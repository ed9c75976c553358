#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ucn/graph.hpp"
#include "ucn/panel.hpp"

namespace ucn {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t cells() const { return tp + fp + tn + fn; }
    double tpr() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
    double fpr() const { return fp + tn == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(fp + tn); }
};

// Cell-wise comparison over every (src, dst, lag) decision cell, self-lags
// included; a cell is positive iff its weight is > 0. With `collapse_lags`
// the n x n adjacency (any lag) is compared instead.
Confusion confusion(const Ucn& predicted, const Ucn& truth, bool collapse_lags = false);

// n x n x tau_max real scores, flattened [src][dst][lag-1].
struct ScoreTensor {
    std::size_t n = 0;
    int tau_max = 0;
    std::vector<double> values;

    double at(std::size_t src, std::size_t dst, int lag) const {
        return values[(src * n + dst) * static_cast<std::size_t>(tau_max) +
                      static_cast<std::size_t>(lag - 1)];
    }
    static ScoreTensor from_network(const Ucn& ucn);
};

// {"n", "tau_max", "scores": [...]}
std::string scores_to_json(const ScoreTensor& scores);
ScoreTensor scores_from_json(const std::string& text);
void write_scores(const std::string& path, const ScoreTensor& scores);
ScoreTensor read_scores(const std::string& path);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
    std::vector<RocPoint> points;  // (0,0) .. (1,1), nondecreasing in both
    double auc = 0.0;
    bool degenerate = false;  // every score equal: the curve is the diagonal
};

// Negative scores are clamped to 0, then min-max scaled to [0, 1]. The sweep
// uses `thresholds` evenly spaced cutoffs plus every distinct scaled score, a
// cell counting as positive when its score is >= the cutoff. AUC by
// trapezoid rule.
RocCurve roc(const ScoreTensor& scores, const Ucn& truth, std::size_t thresholds = 101);

struct GrangerResult {
    ScoreTensor scores;
    std::vector<std::string> notes;  // ridge fallbacks and similar diagnostics
};

// Linear Granger baseline. For every target, fit x_i on all variables at lags
// 1..tau_max (plus intercept) and, for each (j, s), the model without x_{j,t-s};
// score = max(0, log(RSS_restricted / RSS_full)).
GrangerResult granger_scores(const TimeSeriesPanel& panel, int tau_max);

struct MetricsReport {
    double tpr = 0.0;
    double fpr = 0.0;
    std::optional<double> auc;
    std::size_t seeds = 1;
};

std::string metrics_to_json(const MetricsReport& report);

double median(std::vector<double> values);

}  // namespace ucn
