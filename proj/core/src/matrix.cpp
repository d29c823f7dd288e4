#include "bsmf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bsmf {

namespace {

std::string shape_str(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: value count " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str(rows_, cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SparseMatrix SparseMatrix::from_entries(std::size_t rows, std::size_t cols,
                                        std::vector<SparseEntry> entries) {
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) {
            throw ShapeError("SparseMatrix: entry (" + std::to_string(e.row) + "," +
                             std::to_string(e.col) + ") out of bounds for " +
                             shape_str(rows, cols));
        }
        if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
            throw InputError("SparseMatrix: entries must be finite and non-negative");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
            throw InputError("SparseMatrix: duplicate entry at (" +
                             std::to_string(entries[i].row) + "," +
                             std::to_string(entries[i].col) + ")");
        }
    }
    SparseMatrix m(rows, cols);
    m.cols_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::size_t pos = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_start_[r] = pos;
        while (pos < entries.size() && entries[pos].row == r) {
            m.cols_idx_.push_back(entries[pos].col);
            m.values_.push_back(entries[pos].value);
            ++pos;
        }
    }
    m.row_start_[rows] = pos;
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    m.cols_idx_.resize(n);
    m.values_.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_start_[i] = i;
        m.cols_idx_[i] = i;
    }
    m.row_start_[n] = n;
    return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return values_[row_start_[i] + static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) d(i, cols[t]) = vals[t];
    }
    return d;
}

std::vector<SparseEntry> SparseMatrix::entries() const {
    std::vector<SparseEntry> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < rows_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) out.push_back({i, cols[t], vals[t]});
    }
    return out;
}

void SparseRowBuilder::push(std::size_t col, double value) {
    if (col >= m_.cols_ || current_row_ >= m_.rows_) {
        throw ShapeError("RowBuilder: index out of bounds");
    }
    if (row_has_entries_ && col <= last_col_) {
        throw InputError("RowBuilder: columns must be strictly ascending within a row");
    }
    m_.cols_idx_.push_back(col);
    m_.values_.push_back(value);
    last_col_ = col;
    row_has_entries_ = true;
}

void SparseRowBuilder::finish_row() {
    ++current_row_;
    m_.row_start_[current_row_] = m_.cols_idx_.size();
    row_has_entries_ = false;
}

SparseMatrix SparseRowBuilder::take() {
    for (std::size_t r = current_row_ + 1; r <= m_.rows_; ++r) {
        m_.row_start_[r] = m_.cols_idx_.size();
    }
    return std::move(m_);
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("spmm: dimension mismatch (" + shape_str(a.rows(), a.cols()) + " * " +
                         shape_str(b.rows(), b.cols()) + ")");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_values(i);
        auto out_row = out.row(i);
        for (std::size_t t = 0; t < cols.size(); ++t) {
            const double v = vals[t];
            auto b_row = b.row(cols[t]);
            for (std::size_t j = 0; j < b_row.size(); ++j) out_row[j] += v * b_row[j];
        }
    }
    return out;
}

double frobenius_sq(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.data()) sum += v * v;
    return sum;
}

double l1_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.data()) sum += std::abs(v);
    return sum;
}

std::vector<double> row_sums(const SparseMatrix& a) {
    std::vector<double> sums(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (double v : a.row_values(i)) sums[i] += v;
    }
    return sums;
}

DenseMatrix clip_floor(DenseMatrix a, double floor) {
    if (!(floor > 0.0)) throw InputError("clip_floor: floor must be positive");
    for (double& v : a.data()) {
        if (v < floor) v = floor;
    }
    return a;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: dimension mismatch (" + shape_str(a.rows(), a.cols()) + " * " +
                         shape_str(b.rows(), b.cols()) + ")");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto a_row = a.row(i);
        auto out_row = out.row(i);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double v = a_row[l];
            if (v == 0.0) continue;
            auto b_row = b.row(l);
            for (std::size_t j = 0; j < b_row.size(); ++j) out_row[j] += v * b_row[j];
        }
    }
    return out;
}

DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_transposed: dimension mismatch (" +
                         shape_str(a.rows(), a.cols()) + " * " + shape_str(b.cols(), b.rows()) +
                         ")");
    }
    DenseMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto a_row = a.row(i);
        auto out_row = out.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto b_row = b.row(j);
            double sum = 0.0;
            for (std::size_t l = 0; l < a_row.size(); ++l) sum += a_row[l] * b_row[l];
            out_row[j] = sum;
        }
    }
    return out;
}

DenseMatrix gram(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto a_row = a.row(i);
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const double v = a_row[p];
            if (v == 0.0) continue;
            auto out_row = out.row(p);
            for (std::size_t q = 0; q < a.cols(); ++q) out_row[q] += v * a_row[q];
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

double dot(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw ShapeError("dot: shape mismatch");
    double sum = 0.0;
    for (std::size_t t = 0; t < a.data().size(); ++t) sum += a.data()[t] * b.data()[t];
    return sum;
}

}  // namespace bsmf
