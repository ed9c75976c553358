#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ucn/matrix.hpp"

namespace ucn {

// A variable observed `lag` steps before the target time. Lags are always >= 1:
// there are no contemporaneous edges.
struct LaggedVar {
    std::size_t var = 0;
    int lag = 1;

    // Ordering is by (lag, var), the order in which candidates are revisited.
    friend auto operator<=>(const LaggedVar& a, const LaggedVar& b) {
        if (auto c = a.lag <=> b.lag; c != 0) return c;
        return a.var <=> b.var;
    }
    friend bool operator==(const LaggedVar&, const LaggedVar&) = default;
};

// T x n sample matrix with unique variable names. Values are finite.
class TimeSeriesPanel {
public:
    // `values` is row-major: row t holds every variable at time t.
    TimeSeriesPanel(Matrix values, std::vector<std::string> names);

    std::size_t steps() const noexcept { return values_.rows(); }
    std::size_t variables() const noexcept { return values_.cols(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const Matrix& values() const noexcept { return values_; }

    double at(std::size_t t, std::size_t var) const { return values_(t, var); }
    std::vector<double> column(std::size_t var) const;

    // Index of a named variable; throws LookupError if absent.
    std::size_t index_of(const std::string& name) const;

    bool operator==(const TimeSeriesPanel&) const = default;

private:
    Matrix values_;
    std::vector<std::string> names_;
};

// Target column and lagged regressors aligned on the shared window
// t = tau_max .. T-1, so every estimate over one panel sees the same rows.
struct Design {
    std::vector<double> target;
    Matrix regressors;
};

Design build_design(const TimeSeriesPanel& panel, std::size_t target,
                    std::span<const LaggedVar> regressors, int tau_max);

// Regressor block only (same alignment as build_design).
Matrix lagged_matrix(const TimeSeriesPanel& panel, std::span<const LaggedVar> regressors,
                     int tau_max);

// Per-column affine map to sample mean 0 and sample standard deviation 1.
TimeSeriesPanel standardize(const TimeSeriesPanel& panel);

// CSV: header row of names, then one row per time step. LF or CRLF.
TimeSeriesPanel read_panel_csv(std::istream& in);
TimeSeriesPanel read_panel_csv(const std::string& path);
void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel);
void write_panel_csv(const std::string& path, const TimeSeriesPanel& panel);

}  // namespace ucn
