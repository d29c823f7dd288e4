#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsmf/matrix.hpp"

namespace bsmf {

/// K x K binary belief mixture matrix. Entry (p, q) = 1 means sources holding
/// belief p endorse claims espousing belief q.
///
/// Invariants: entries are 0/1, no all-zero row or column, diagonal all ones.
/// Index 0 is reserved by convention for the shared/overlap region in star
/// structures.
class BeliefMixture {
public:
    /// Star structure: column 0 all ones (the overlap region, endorsed by
    /// everyone), identity on the remaining k-1 exclusive beliefs.
    static BeliefMixture star(std::size_t k);

    /// Identity structure; degenerates the factorization to standard NMF.
    static BeliefMixture identity(std::size_t k);

    /// Arbitrary user-supplied structure; validates all invariants and names
    /// the violated one on rejection.
    static BeliefMixture from_rows(const std::vector<std::vector<int>>& rows,
                                   std::vector<std::string> names = {});

    /// Parses {"k": int, "rows": [[0|1,...],...], "names": [str,...]}.
    static BeliefMixture from_json_string(const std::string& text);
    static BeliefMixture from_json_file(const std::string& path);
    std::string to_json_string() const;

    std::size_t k() const { return k_; }
    int at(std::size_t p, std::size_t q) const { return entries_[p * k_ + q]; }
    const std::vector<std::string>& region_names() const { return names_; }

    DenseMatrix dense() const;
    bool is_identity() const;
    bool operator==(const BeliefMixture& other) const {
        return k_ == other.k_ && entries_ == other.entries_;
    }

private:
    BeliefMixture(std::size_t k, std::vector<std::uint8_t> entries, std::vector<std::string> names)
        : k_(k), entries_(std::move(entries)), names_(std::move(names)) {}

    std::size_t k_ = 0;
    std::vector<std::uint8_t> entries_;
    std::vector<std::string> names_;
};

}  // namespace bsmf
