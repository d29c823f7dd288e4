#pragma once

#include <random>
#include <vector>

#include "bsmf/matrix.hpp"

namespace bsmf::test {

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = dist(rng);
    return m;
}

inline SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density,
                                  std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (unit(rng) < density) entries.push_back({i, j, unit(rng)});
        }
    }
    return SparseMatrix::from_entries(rows, cols, std::move(entries));
}

// Brute-force reference product: densify and multiply entry by entry.
inline DenseMatrix dense_product_oracle(const SparseMatrix& a, const DenseMatrix& b) {
    const DenseMatrix ad = a.to_dense();
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double sum = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) sum += ad(i, l) * b(l, j);
            out(i, j) = sum;
        }
    }
    return out;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double worst = 0.0;
    for (std::size_t t = 0; t < a.data().size(); ++t) {
        worst = std::max(worst, std::abs(a.data()[t] - b.data()[t]));
    }
    return worst;
}

}  // namespace bsmf::test
