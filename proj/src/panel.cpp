#include "ucn/panel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "ucn/error.hpp"

namespace ucn {

TimeSeriesPanel::TimeSeriesPanel(Matrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
    if (values_.rows() < 2) throw InsufficientDataError("panel needs at least 2 time steps");
    if (values_.cols() < 1) throw ShapeError("panel needs at least 1 variable");
    if (names_.size() != values_.cols()) {
        throw ShapeError("panel has " + std::to_string(values_.cols()) + " columns but " +
                         std::to_string(names_.size()) + " names");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) throw ConfigError("duplicate variable name '" + name + "'");
    }
    for (std::size_t t = 0; t < values_.rows(); ++t) {
        for (std::size_t v = 0; v < values_.cols(); ++v) {
            if (!std::isfinite(values_(t, v))) {
                throw ParseError("non-finite value at row " + std::to_string(t) + ", column '" +
                                 names_[v] + "'");
            }
        }
    }
}

std::vector<double> TimeSeriesPanel::column(std::size_t var) const {
    std::vector<double> out(steps());
    for (std::size_t t = 0; t < steps(); ++t) out[t] = values_(t, var);
    return out;
}

std::size_t TimeSeriesPanel::index_of(const std::string& name) const {
    for (std::size_t v = 0; v < names_.size(); ++v) {
        if (names_[v] == name) return v;
    }
    throw LookupError("no variable named '" + name + "'");
}

namespace {

void check_alignment(const TimeSeriesPanel& panel, std::span<const LaggedVar> regressors,
                     int tau_max) {
    if (tau_max < 1) throw ConfigError("tau_max must be >= 1");
    if (static_cast<std::size_t>(tau_max) >= panel.steps()) {
        throw InsufficientDataError("tau_max " + std::to_string(tau_max) +
                                    " leaves no rows in a panel of " +
                                    std::to_string(panel.steps()) + " steps");
    }
    for (const auto& r : regressors) {
        if (r.var >= panel.variables()) throw LookupError("regressor variable out of range");
        if (r.lag < 1 || r.lag > tau_max) {
            throw ConfigError("regressor lag " + std::to_string(r.lag) + " outside [1, " +
                              std::to_string(tau_max) + "]");
        }
    }
}

}  // namespace

Matrix lagged_matrix(const TimeSeriesPanel& panel, std::span<const LaggedVar> regressors,
                     int tau_max) {
    check_alignment(panel, regressors, tau_max);
    const std::size_t rows = panel.steps() - static_cast<std::size_t>(tau_max);
    Matrix out(rows, regressors.size());
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(tau_max);
        for (std::size_t c = 0; c < regressors.size(); ++c) {
            out(r, c) = panel.at(t - static_cast<std::size_t>(regressors[c].lag), regressors[c].var);
        }
    }
    return out;
}

Design build_design(const TimeSeriesPanel& panel, std::size_t target,
                    std::span<const LaggedVar> regressors, int tau_max) {
    if (target >= panel.variables()) throw LookupError("target variable out of range");
    Design d;
    d.regressors = lagged_matrix(panel, regressors, tau_max);
    const std::size_t rows = d.regressors.rows();
    d.target.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        d.target[r] = panel.at(r + static_cast<std::size_t>(tau_max), target);
    }
    return d;
}

TimeSeriesPanel standardize(const TimeSeriesPanel& panel) {
    const std::size_t T = panel.steps();
    Matrix out(T, panel.variables());
    for (std::size_t v = 0; v < panel.variables(); ++v) {
        double mean = 0.0;
        for (std::size_t t = 0; t < T; ++t) mean += panel.at(t, v);
        mean /= static_cast<double>(T);
        double ss = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double d = panel.at(t, v) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(T - 1));
        if (!(sd > 0.0)) {
            throw DegenerateVariableError("variable '" + panel.names()[v] +
                                          "' is constant; cannot standardize");
        }
        for (std::size_t t = 0; t < T; ++t) out(t, v) = (panel.at(t, v) - mean) / sd;
    }
    return TimeSeriesPanel(std::move(out), panel.names());
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

}  // namespace

TimeSeriesPanel read_panel_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError("CSV is empty: missing header row");
    for (auto field : split_commas(trim(line))) {
        if (field.empty()) throw ParseError("CSV header has an empty variable name");
        names.emplace_back(field);
    }
    const std::size_t n = names.size();

    std::vector<double> data;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto fields = split_commas(body);
        if (fields.size() != n) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n) + " fields, found " +
                             std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < n; ++c) {
            const auto f = fields[c];
            double value = 0.0;
            const char* first = f.data();
            if (!f.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), value);
            if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() ||
                !std::isfinite(value)) {
                throw ParseError("CSV line " + std::to_string(line_no) + ", column '" + names[c] +
                                 "': cannot parse '" + std::string(f) + "' as a finite number");
            }
            data.push_back(value);
        }
        ++rows;
    }
    return TimeSeriesPanel(Matrix(rows, n, std::move(data)), std::move(names));
}

TimeSeriesPanel read_panel_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open panel '" + path + "'");
    return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel) {
    const auto& names = panel.names();
    for (std::size_t v = 0; v < names.size(); ++v) out << (v ? "," : "") << names[v];
    out << '\n';
    char buf[32];
    for (std::size_t t = 0; t < panel.steps(); ++t) {
        for (std::size_t v = 0; v < panel.variables(); ++v) {
            std::snprintf(buf, sizeof buf, "%.17g", panel.at(t, v));
            out << (v ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_panel_csv(const std::string& path, const TimeSeriesPanel& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write panel '" + path + "'");
    write_panel_csv(out, panel);
    if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace ucn
