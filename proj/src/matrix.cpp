#include "ucn/matrix.hpp"

#include "ucn/error.hpp"

namespace ucn {

Matrix Matrix::hstack(std::initializer_list<const Matrix*> parts) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool have_rows = false;
    for (const Matrix* p : parts) {
        if (p->cols() == 0) continue;
        if (have_rows && p->rows() != rows) {
            throw ShapeError("hstack: row counts differ (" + std::to_string(rows) + " vs " +
                             std::to_string(p->rows()) + ")");
        }
        rows = p->rows();
        have_rows = true;
        cols += p->cols();
    }
    Matrix out(rows, cols);
    std::size_t offset = 0;
    for (const Matrix* p : parts) {
        if (p->cols() == 0) continue;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < p->cols(); ++c) out(r, offset + c) = (*p)(r, c);
        }
        offset += p->cols();
    }
    return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
    Matrix out(rows_, cols.size());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = (*this)(r, cols[c]);
    }
    return out;
}

}  // namespace ucn
