#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsmf/factorization.hpp"

namespace bsmf {

/// Region picked per claim/source as the argmax of its factor row; ties break
/// to the lowest index.
struct Assignment {
    std::vector<std::size_t> claim_region;
    std::vector<std::size_t> source_region;
    std::vector<double> claim_score;  // winning row value per claim
};

Assignment assign(const FactorPair& f);

/// Relabeling of predicted cluster indices that maximizes agreement with the
/// truth, via optimal assignment on the K x K confusion matrix. perm[p] is
/// the truth label assigned to predicted label p. Entries of `truth` below 0
/// are ignored (unlabeled). With pin_overlap, predicted region 0 stays 0
/// (star structures identify the overlap column structurally).
std::vector<std::size_t> align(const std::vector<std::size_t>& pred,
                               const std::vector<int>& truth, std::size_t k,
                               bool pin_overlap = false);

std::vector<std::size_t> apply_permutation(const std::vector<std::size_t>& pred,
                                           const std::vector<std::size_t>& perm);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

/// Multi-class report over labeled claims: accuracy, per-class and macro /
/// support-weighted precision, recall, F1. Empty denominators score 0.
struct MetricsReport {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    std::vector<std::size_t> permutation;  // alignment used, when any
    std::size_t n_scored = 0;              // labeled claims
    std::size_t n_total = 0;               // all claims

    std::string to_json_string() const;
};

/// Scores already-aligned predictions against truth; entries with truth < 0
/// are skipped (and counted only in n_total).
MetricsReport score(const std::vector<std::size_t>& pred, const std::vector<int>& truth,
                    std::size_t k);

/// align + apply + score in one step; records the permutation in the report.
MetricsReport evaluate_labels(const std::vector<std::size_t>& pred, const std::vector<int>& truth,
                              std::size_t k, bool pin_overlap = false);

/// Claims assigned to `region`, ranked by descending region score, ties by
/// claim index; truncated to top_k.
std::vector<std::size_t> top_k_claims(const FactorPair& f, std::size_t region, std::size_t top_k);

}  // namespace bsmf
