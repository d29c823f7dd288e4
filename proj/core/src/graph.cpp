#include "bsmf/graph.hpp"

#include <map>

namespace bsmf {

SocialGraph::SocialGraph(SparseMatrix adjacency) {
    if (adjacency.rows() != adjacency.cols()) {
        throw ShapeError("social graph: adjacency must be square, got " +
                         std::to_string(adjacency.rows()) + "x" +
                         std::to_string(adjacency.cols()));
    }
    bool has_diagonal = false;
    for (std::size_t i = 0; i < adjacency.rows() && !has_diagonal; ++i) {
        has_diagonal = adjacency.at(i, i) != 0.0;
    }
    if (!has_diagonal) {
        a_ = std::move(adjacency);
        return;
    }
    auto entries = adjacency.entries();
    std::erase_if(entries, [](const SparseEntry& e) { return e.row == e.col; });
    a_ = SparseMatrix::from_entries(adjacency.rows(), adjacency.cols(), std::move(entries));
}

SocialGraph SocialGraph::from_edges(
    std::size_t n_sources, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
    bool symmetrize) {
    std::map<std::pair<std::size_t, std::size_t>, double> counts;
    for (const auto& [retweeter, author, count] : edges) {
        if (retweeter >= n_sources || author >= n_sources) {
            throw InputError("social graph: edge (" + std::to_string(retweeter) + "," +
                             std::to_string(author) + ") out of range");
        }
        if (!(count >= 0.0)) {
            throw InputError("social graph: edge counts must be non-negative");
        }
        if (retweeter == author || count == 0.0) continue;
        counts[{retweeter, author}] += count;
        if (symmetrize) counts[{author, retweeter}] += count;
    }
    std::vector<SparseEntry> entries;
    entries.reserve(counts.size());
    for (const auto& [key, count] : counts) entries.push_back({key.first, key.second, count});
    return SocialGraph(SparseMatrix::from_entries(n_sources, n_sources, std::move(entries)));
}

PropagationOperator PropagationOperator::build(const SocialGraph& graph) {
    const SparseMatrix& a = graph.adjacency();
    const std::size_t n = a.rows();
    const auto degrees = row_sums(a);
    SparseRowBuilder out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (degrees[i] == 0.0) {
            out.push(i, 1.0);  // isolated node keeps everything
            out.finish_row();
            continue;
        }
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        const double scale = 0.5 / degrees[i];
        bool self_emitted = false;
        for (std::size_t t = 0; t < cols.size(); ++t) {
            if (!self_emitted && cols[t] > i) {
                out.push(i, 0.5);
                self_emitted = true;
            }
            out.push(cols[t], vals[t] * scale);
        }
        if (!self_emitted) out.push(i, 0.5);
        out.finish_row();
    }
    return PropagationOperator(out.take());
}

DenseMatrix convolve(const PropagationOperator& op, const SparseMatrix& xm) {
    if (op.matrix().cols() != xm.rows()) {
        throw ShapeError("convolve: operator is " + std::to_string(op.matrix().rows()) + "x" +
                         std::to_string(op.matrix().cols()) + " but x^M has " +
                         std::to_string(xm.rows()) + " rows");
    }
    const SparseMatrix& w = op.matrix();
    DenseMatrix out(w.rows(), xm.cols());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        auto w_cols = w.row_cols(i);
        auto w_vals = w.row_values(i);
        auto out_row = out.row(i);
        for (std::size_t t = 0; t < w_cols.size(); ++t) {
            const double weight = w_vals[t];
            const std::size_t l = w_cols[t];
            auto x_cols = xm.row_cols(l);
            auto x_vals = xm.row_values(l);
            for (std::size_t s = 0; s < x_cols.size(); ++s) {
                out_row[x_cols[s]] += weight * x_vals[s];
            }
        }
        // Row-stochastic weights keep values in [0,1] up to rounding; pin the
        // contract so downstream range checks never see 1 + ulp.
        for (double& v : out_row) {
            if (v > 1.0) v = 1.0;
        }
    }
    return out;
}

}  // namespace bsmf
