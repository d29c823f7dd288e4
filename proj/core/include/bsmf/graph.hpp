#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "bsmf/matrix.hpp"

namespace bsmf {

/// Retweet graph: entry (i, j) counts how often source i retweeted source j.
/// Self-loops are dropped on construction.
class SocialGraph {
public:
    explicit SocialGraph(SparseMatrix adjacency);

    /// Accumulates duplicate edges; drops self-loops; optionally symmetrizes
    /// by adding the transposed counts.
    static SocialGraph from_edges(std::size_t n_sources,
                                  const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                                  bool symmetrize = false);

    const SparseMatrix& adjacency() const { return a_; }
    std::size_t size() const { return a_.rows(); }

private:
    SparseMatrix a_;
};

/// Row-stochastic one-hop propagation operator. For rows with out-degree > 0
/// it is 0.5 * (F^-1 A + I) with F the row-sum degree matrix, so each node
/// keeps half of its own information; a row with no neighbors is the unit
/// self-loop. Only one-hop structure is used, never powers of A.
class PropagationOperator {
public:
    static PropagationOperator build(const SocialGraph& graph);

    const SparseMatrix& matrix() const { return op_; }
    std::size_t size() const { return op_.rows(); }

private:
    explicit PropagationOperator(SparseMatrix op) : op_(std::move(op)) {}
    SparseMatrix op_;
};

/// X^MS = op * X^M. Row-stochastic operator and X^M in [0,1] keep the result
/// in [0,1].
DenseMatrix convolve(const PropagationOperator& op, const SparseMatrix& xm);

}  // namespace bsmf
