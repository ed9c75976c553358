#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace ucn {

// Dense row-major real matrix. Rows are samples, columns are coordinates.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(data_.size() == rows_ * cols_);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> flat() const noexcept { return data_; }
    std::span<double> flat() noexcept { return data_; }

    // Single-column matrix from a vector.
    static Matrix column(std::span<const double> values) {
        return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
    }

    // Horizontal concatenation; all parts must share a row count (0-column
    // parts are allowed and contribute nothing).
    static Matrix hstack(std::initializer_list<const Matrix*> parts);

    // Subset of columns, in the given order.
    Matrix select_columns(std::span<const std::size_t> cols) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace ucn
