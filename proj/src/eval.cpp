#include "ucn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ucn/error.hpp"

namespace ucn {

Confusion confusion(const Ucn& predicted, const Ucn& truth, bool collapse_lags) {
    if (predicted.n() != truth.n() || predicted.tau_max() != truth.tau_max()) {
        throw ComparisonError("networks differ in shape: n " + std::to_string(predicted.n()) +
                              " vs " + std::to_string(truth.n()) + ", tau_max " +
                              std::to_string(predicted.tau_max()) + " vs " +
                              std::to_string(truth.tau_max()));
    }
    if (predicted.names() != truth.names()) {
        throw ComparisonError("networks list their variables in a different order");
    }
    Confusion c;
    auto tally = [&c](bool p, bool t) {
        if (p && t) ++c.tp;
        else if (p) ++c.fp;
        else if (t) ++c.fn;
        else ++c.tn;
    };
    const std::size_t n = truth.n();
    for (std::size_t src = 0; src < n; ++src) {
        for (std::size_t dst = 0; dst < n; ++dst) {
            if (collapse_lags) {
                bool p = false;
                bool t = false;
                for (int lag = 1; lag <= truth.tau_max(); ++lag) {
                    p = p || predicted.has_edge(src, dst, lag);
                    t = t || truth.has_edge(src, dst, lag);
                }
                tally(p, t);
            } else {
                for (int lag = 1; lag <= truth.tau_max(); ++lag) {
                    tally(predicted.has_edge(src, dst, lag), truth.has_edge(src, dst, lag));
                }
            }
        }
    }
    return c;
}

ScoreTensor ScoreTensor::from_network(const Ucn& ucn) {
    return {ucn.n(), ucn.tau_max(), std::vector<double>(ucn.weights().begin(), ucn.weights().end())};
}

std::string scores_to_json(const ScoreTensor& scores) {
    nlohmann::ordered_json j;
    j["n"] = scores.n;
    j["tau_max"] = scores.tau_max;
    j["scores"] = scores.values;
    return j.dump() + "\n";
}

ScoreTensor scores_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        ScoreTensor s;
        s.n = j.at("n").get<std::size_t>();
        s.tau_max = j.at("tau_max").get<int>();
        s.values = j.at("scores").get<std::vector<double>>();
        if (s.tau_max < 1 || s.values.size() != s.n * s.n * static_cast<std::size_t>(s.tau_max)) {
            throw ParseError("score tensor has " + std::to_string(s.values.size()) +
                             " entries; expected n*n*tau_max");
        }
        return s;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("score JSON: ") + ex.what());
    }
}

void write_scores(const std::string& path, const ScoreTensor& scores) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write scores '" + path + "'");
    out << scores_to_json(scores);
}

ScoreTensor read_scores(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scores '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scores_from_json(ss.str());
}

RocCurve roc(const ScoreTensor& scores, const Ucn& truth, std::size_t thresholds) {
    if (scores.n != truth.n() || scores.tau_max != truth.tau_max()) {
        throw ComparisonError("score tensor shape does not match the truth network");
    }
    const auto& w = truth.weights();
    std::vector<double> s(scores.values.size());
    std::size_t positives = 0;
    for (std::size_t c = 0; c < s.size(); ++c) {
        if (!std::isfinite(scores.values[c])) throw ConfigError("scores must be finite");
        s[c] = std::max(scores.values[c], 0.0);
        positives += w[c] > 0.0;
    }
    const std::size_t negatives = s.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw ComparisonError("ROC needs at least one positive and one negative truth cell");
    }

    RocCurve curve;
    const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        curve.degenerate = true;
        curve.points = {{0.0, 0.0}, {1.0, 1.0}};
        curve.auc = 0.5;
        return curve;
    }
    for (double& v : s) v = (v - lo) / (hi - lo);

    std::vector<double> cutoffs(s.begin(), s.end());
    for (std::size_t t = 0; t < thresholds; ++t) {
        cutoffs.push_back(thresholds == 1 ? 0.0
                                          : static_cast<double>(t) / static_cast<double>(thresholds - 1));
    }
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());

    // Sweep cutoffs from high to low over cells sorted by descending score.
    std::vector<std::size_t> order(s.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

    curve.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0, next = 0;
    for (auto it = cutoffs.rbegin(); it != cutoffs.rend(); ++it) {
        while (next < order.size() && s[order[next]] >= *it) {
            (w[order[next]] > 0.0 ? tp : fp) += 1;
            ++next;
        }
        const RocPoint p{static_cast<double>(fp) / static_cast<double>(negatives),
                         static_cast<double>(tp) / static_cast<double>(positives)};
        if (!(p == curve.points.back())) curve.points.push_back(p);
    }
    if (!(curve.points.back() == RocPoint{1.0, 1.0})) curve.points.push_back({1.0, 1.0});

    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return curve;
}

std::string metrics_to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["tpr"] = report.tpr;
    j["fpr"] = report.fpr;
    if (report.auc) {
        j["auc"] = *report.auc;
    } else {
        j["auc"] = nullptr;
    }
    j["seeds"] = report.seeds;
    return j.dump(2) + "\n";
}

double median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace ucn
