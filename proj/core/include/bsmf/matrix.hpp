#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsmf/errors.hpp"

namespace bsmf {

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SparseEntry {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Sparse non-negative matrix in canonical form: entries grouped by row,
/// ascending column within each row, no duplicates. Stored CSR-style so row
/// slices are cheap.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), row_start_(rows + 1, 0) {}

    /// Builds the canonical form from an arbitrary coordinate list.
    /// Rejects out-of-bounds indices, duplicate coordinates, and negative values.
    static SparseMatrix from_entries(std::size_t rows, std::size_t cols,
                                     std::vector<SparseEntry> entries);

    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return cols_idx_.size(); }

    std::span<const std::size_t> row_cols(std::size_t i) const {
        return {cols_idx_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
    }
    std::span<const double> row_values(std::size_t i) const {
        return {values_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
    }

    double at(std::size_t i, std::size_t j) const;

    DenseMatrix to_dense() const;
    std::vector<SparseEntry> entries() const;

private:
    friend class SparseRowBuilder;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> cols_idx_;
    std::vector<double> values_;
};

/// Streaming builder for canonical sparse matrices; rows must be appended in
/// ascending order with ascending columns. Used by the interpolation and
/// propagation kernels.
class SparseRowBuilder {
public:
    SparseRowBuilder(std::size_t rows, std::size_t cols) : m_(rows, cols) {}
    void push(std::size_t col, double value);
    void finish_row();
    SparseMatrix take();

private:
    SparseMatrix m_;
    std::size_t current_row_ = 0;
    std::size_t last_col_ = 0;
    bool row_has_entries_ = false;
};

/// Sparse-dense product a * b.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

/// Sum of squared entries (squared Frobenius norm).
double frobenius_sq(const DenseMatrix& a);

/// Sum of absolute values of all entries.
double l1_norm(const DenseMatrix& a);

/// Per-row sums of a sparse matrix.
std::vector<double> row_sums(const SparseMatrix& a);

/// Replaces every entry below `floor` with `floor`; requires floor > 0.
/// Keeps factor matrices strictly positive for the multiplicative updates.
DenseMatrix clip_floor(DenseMatrix a, double floor);

// Dense helpers used by the factorization engine.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_transposed(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T
DenseMatrix gram(const DenseMatrix& a);                                     // a^T * a
DenseMatrix transpose(const DenseMatrix& a);
double dot(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace bsmf
