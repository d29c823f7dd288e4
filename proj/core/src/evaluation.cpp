#include "bsmf/evaluation.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include <json.hpp>

namespace bsmf {

namespace {

std::size_t argmax_row(std::span<const double> row) {
    std::size_t best = 0;
    for (std::size_t q = 1; q < row.size(); ++q) {
        if (row[q] > row[best]) best = q;  // ties keep the lowest index
    }
    return best;
}

// Confusion counts over labeled entries: counts[p][t] = #(pred == p, truth == t).
std::vector<std::vector<std::size_t>> confusion(const std::vector<std::size_t>& pred,
                                                const std::vector<int>& truth, std::size_t k) {
    if (pred.size() != truth.size()) {
        throw InputError("evaluation: prediction and truth lengths differ");
    }
    std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] < 0) continue;
        if (pred[i] >= k || static_cast<std::size_t>(truth[i]) >= k) {
            throw InputError("evaluation: label out of range [0, k)");
        }
        ++counts[pred[i]][truth[i]];
    }
    return counts;
}

// Max-weight assignment of rows to columns by subset DP; deterministic
// tie-break toward the lowest column for earlier rows.
std::vector<std::size_t> best_assignment(const std::vector<std::vector<std::size_t>>& weight) {
    const std::size_t k = weight.size();
    if (k > 24) throw InputError("align: k too large for exhaustive alignment");
    const std::size_t n_masks = std::size_t{1} << k;
    constexpr double kUnset = -1.0;
    std::vector<double> dp(n_masks, kUnset);
    dp[0] = 0.0;
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        const std::size_t row = static_cast<std::size_t>(std::popcount(mask)) - 1;
        for (std::size_t c = 0; c < k; ++c) {
            if (!(mask & (std::size_t{1} << c))) continue;
            const double candidate =
                dp[mask ^ (std::size_t{1} << c)] + static_cast<double>(weight[row][c]);
            if (candidate > dp[mask]) dp[mask] = candidate;
        }
    }
    std::vector<std::size_t> perm(k, 0);
    std::size_t mask = n_masks - 1;
    for (std::size_t row = k; row-- > 0;) {
        for (std::size_t c = 0; c < k; ++c) {
            if (!(mask & (std::size_t{1} << c))) continue;
            const std::size_t prev = mask ^ (std::size_t{1} << c);
            if (dp[prev] + static_cast<double>(weight[row][c]) == dp[mask]) {
                perm[row] = c;
                mask = prev;
                break;
            }
        }
    }
    return perm;
}

}  // namespace

Assignment assign(const FactorPair& f) {
    Assignment a;
    a.claim_region.reserve(f.m.rows());
    a.claim_score.reserve(f.m.rows());
    for (std::size_t j = 0; j < f.m.rows(); ++j) {
        const auto row = f.m.row(j);
        const std::size_t q = argmax_row(row);
        a.claim_region.push_back(q);
        a.claim_score.push_back(row[q]);
    }
    a.source_region.reserve(f.u.rows());
    for (std::size_t i = 0; i < f.u.rows(); ++i) {
        a.source_region.push_back(argmax_row(f.u.row(i)));
    }
    return a;
}

std::vector<std::size_t> align(const std::vector<std::size_t>& pred,
                               const std::vector<int>& truth, std::size_t k, bool pin_overlap) {
    const auto counts = confusion(pred, truth, k);
    if (!pin_overlap) return best_assignment(counts);
    // Region 0 stays pinned; assign the rest optimally.
    std::vector<std::vector<std::size_t>> sub(k - 1, std::vector<std::size_t>(k - 1, 0));
    for (std::size_t p = 1; p < k; ++p) {
        for (std::size_t t = 1; t < k; ++t) sub[p - 1][t - 1] = counts[p][t];
    }
    const auto sub_perm = best_assignment(sub);
    std::vector<std::size_t> perm(k, 0);
    for (std::size_t p = 1; p < k; ++p) perm[p] = sub_perm[p - 1] + 1;
    return perm;
}

std::vector<std::size_t> apply_permutation(const std::vector<std::size_t>& pred,
                                           const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> out(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) out[i] = perm.at(pred[i]);
    return out;
}

MetricsReport score(const std::vector<std::size_t>& pred, const std::vector<int>& truth,
                    std::size_t k) {
    const auto counts = confusion(pred, truth, k);
    MetricsReport r;
    r.n_total = pred.size();
    r.per_class.resize(k);
    std::size_t correct = 0, total = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t tp = counts[c][c], pred_c = 0, true_c = 0;
        for (std::size_t t = 0; t < k; ++t) {
            pred_c += counts[c][t];
            true_c += counts[t][c];
        }
        auto& m = r.per_class[c];
        m.support = true_c;
        m.precision = pred_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_c);
        m.recall = true_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(true_c);
        m.f1 = (m.precision + m.recall) == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        correct += tp;
        total += true_c;
    }
    r.n_scored = total;
    r.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    for (const auto& m : r.per_class) {
        r.macro_precision += m.precision / static_cast<double>(k);
        r.macro_recall += m.recall / static_cast<double>(k);
        r.macro_f1 += m.f1 / static_cast<double>(k);
        if (total > 0) {
            const double w = static_cast<double>(m.support) / static_cast<double>(total);
            r.weighted_precision += w * m.precision;
            r.weighted_recall += w * m.recall;
            r.weighted_f1 += w * m.f1;
        }
    }
    return r;
}

MetricsReport evaluate_labels(const std::vector<std::size_t>& pred, const std::vector<int>& truth,
                              std::size_t k, bool pin_overlap) {
    const auto perm = align(pred, truth, k, pin_overlap);
    MetricsReport r = score(apply_permutation(pred, perm), truth, k);
    r.permutation = perm;
    return r;
}

std::vector<std::size_t> top_k_claims(const FactorPair& f, std::size_t region, std::size_t top_k) {
    if (region >= f.m.cols()) {
        throw InputError("top_k_claims: region " + std::to_string(region) + " out of range");
    }
    const Assignment a = assign(f);
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < a.claim_region.size(); ++j) {
        if (a.claim_region[j] == region) members.push_back(j);
    }
    std::stable_sort(members.begin(), members.end(), [&](std::size_t lhs, std::size_t rhs) {
        return f.m(lhs, region) > f.m(rhs, region);  // stable keeps claim-id order on ties
    });
    if (members.size() > top_k) members.resize(top_k);
    return members;
}

std::string MetricsReport::to_json_string() const {
    nlohmann::json j;
    j["accuracy"] = accuracy;
    j["macro"] = {{"precision", macro_precision}, {"recall", macro_recall}, {"f1", macro_f1}};
    j["weighted"] = {{"precision", weighted_precision},
                     {"recall", weighted_recall},
                     {"f1", weighted_f1}};
    auto classes = nlohmann::json::array();
    for (const auto& m : per_class) {
        classes.push_back({{"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1},
                           {"support", m.support}});
    }
    j["per_class"] = classes;
    j["alignment"] = permutation;
    j["scored_claims"] = n_scored;
    j["total_claims"] = n_total;
    return j.dump(2);
}

}  // namespace bsmf
