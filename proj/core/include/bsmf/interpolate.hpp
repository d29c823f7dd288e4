#pragma once

#include <vector>

#include "bsmf/matrix.hpp"
#include "bsmf/text.hpp"

namespace bsmf {

/// Gaussian radius function parameters for claim similarity,
/// d = exp(-(epsilon * r)^2) with r the Euclidean distance between normalized
/// bag-of-words vectors. Interpolated endorsements below `cutoff` are zeroed.
struct RbfParams {
    double epsilon = 1.0;
    double cutoff = 0.2;

    void validate() const;
};

/// d = exp(-(epsilon * ||wa - wb||)^2), in (0, 1]. Both vectors must be
/// normalized and non-empty.
double rbf_similarity(const BowVector& wa, const BowVector& wb, const RbfParams& p);

/// Similarity interpolation of a binary source-claim matrix. Observed
/// endorsements stay exactly 1. For x_ij = 0, the claims a source endorsed
/// act as medoids and x^M_ij = sum_k d_kj over them, clamped to 1; values
/// below p.cutoff are set back to 0.
///
/// `bows` holds one vector per claim column; a claim with no tokens cannot
/// form a medoid and is rejected.
SparseMatrix interpolate(const SparseMatrix& x, const std::vector<BowVector>& bows,
                         const RbfParams& p);

}  // namespace bsmf
