#include "bsmf/interpolate.hpp"

#include <algorithm>
#include <cmath>

namespace bsmf {

void RbfParams::validate() const {
    if (!(epsilon > 0.0)) throw InputError("rbf: epsilon must be positive");
    if (!(cutoff >= 0.0 && cutoff < 1.0)) throw InputError("rbf: cutoff must be in [0, 1)");
}

double rbf_similarity(const BowVector& wa, const BowVector& wb, const RbfParams& p) {
    if (wa.empty() || wb.empty()) {
        throw InputError("rbf_similarity: empty bag-of-words vector");
    }
    // For unit vectors r^2 = ||wa - wb||^2 = 2 - 2*cos.
    const double r_sq = std::max(2.0 - 2.0 * cosine(wa, wb), 0.0);
    return std::exp(-p.epsilon * p.epsilon * r_sq);
}

SparseMatrix interpolate(const SparseMatrix& x, const std::vector<BowVector>& bows,
                         const RbfParams& p) {
    p.validate();
    const std::size_t n_sources = x.rows();
    const std::size_t n_claims = x.cols();
    if (bows.size() != n_claims) {
        throw ShapeError("interpolate: expected " + std::to_string(n_claims) +
                         " claim vectors, got " + std::to_string(bows.size()));
    }
    for (std::size_t j = 0; j < n_claims; ++j) {
        if (bows[j].empty()) {
            throw InputError("interpolate: claim " + std::to_string(j) +
                             " has no tokens and cannot form a medoid");
        }
    }
    std::uint32_t max_token = 0;
    for (const auto& bow : bows) {
        for (const auto& [t, w] : bow.weights()) max_token = std::max(max_token, t);
    }
    for (std::size_t i = 0; i < n_sources; ++i) {
        for (double v : x.row_values(i)) {
            if (v != 1.0) throw InputError("interpolate: x must be binary");
        }
    }

    // Inverted index token -> (claim, weight), claims ascending.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> index(max_token + 1);
    for (std::uint32_t j = 0; j < n_claims; ++j) {
        for (const auto& [t, w] : bows[j].weights()) index[t].emplace_back(j, w);
    }

    const double eps_sq = p.epsilon * p.epsilon;
    // Similarity of a disjoint-vocabulary pair (cos 0, r^2 = 2). Every
    // medoid contributes at least this much to every claim, so the per-pair
    // exponential only needs evaluating where vocabularies overlap.
    const double baseline = std::exp(-2.0 * eps_sq);

    std::vector<double> cos_buf(n_claims, 0.0);
    std::vector<double> excess(n_claims, 0.0);  // sum of (d - baseline) over medoids
    std::vector<std::uint32_t> touched;
    std::vector<std::uint32_t> row_touched;

    SparseRowBuilder out(n_sources, n_claims);
    for (std::size_t i = 0; i < n_sources; ++i) {
        const auto medoids = x.row_cols(i);
        if (medoids.empty()) {
            out.finish_row();
            continue;
        }
        row_touched.clear();
        for (std::size_t k : medoids) {
            touched.clear();
            for (const auto& [t, wk] : bows[k].weights()) {
                for (const auto& [j, wj] : index[t]) {
                    if (cos_buf[j] == 0.0) touched.push_back(j);
                    cos_buf[j] += wk * wj;
                }
            }
            for (std::uint32_t j : touched) {
                const double c = std::min(cos_buf[j], 1.0);
                cos_buf[j] = 0.0;
                const double d = std::exp(-eps_sq * (2.0 - 2.0 * c));
                if (excess[j] == 0.0) row_touched.push_back(j);
                excess[j] += d - baseline;
            }
        }
        const double base_total = static_cast<double>(medoids.size()) * baseline;
        auto interpolated = [&](std::size_t j) { return std::min(excess[j] + base_total, 1.0); };
        if (base_total >= p.cutoff) {
            // Every column clears the cutoff from the baseline alone.
            for (std::size_t j = 0; j < n_claims; ++j) {
                const bool observed = std::binary_search(medoids.begin(), medoids.end(), j);
                out.push(j, observed ? 1.0 : interpolated(j));
            }
        } else {
            std::sort(row_touched.begin(), row_touched.end());
            row_touched.erase(std::unique(row_touched.begin(), row_touched.end()),
                              row_touched.end());
            std::size_t mi = 0, ti = 0;
            while (mi < medoids.size() || ti < row_touched.size()) {
                if (mi < medoids.size() &&
                    (ti == row_touched.size() || medoids[mi] <= row_touched[ti])) {
                    if (ti < row_touched.size() && row_touched[ti] == medoids[mi]) ++ti;
                    out.push(medoids[mi], 1.0);
                    ++mi;
                } else {
                    const std::size_t j = row_touched[ti++];
                    const double v = interpolated(j);
                    if (v >= p.cutoff) out.push(j, v);
                }
            }
        }
        for (std::uint32_t j : row_touched) excess[j] = 0.0;
        out.finish_row();
    }
    return out.take();
}

}  // namespace bsmf
