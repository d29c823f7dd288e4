#pragma once

#include <cstdint>

#include "bsmf/dataset.hpp"

namespace bsmf {

/// Overlapping-belief dataset protocol: k belief regions (index 0 is the
/// shared overlap region o), one disjoint word corpus per region, one group
/// of users per region. Overlap users draw every token from corpus o;
/// b-group users draw each token from corpus o with probability overlap_mix,
/// otherwise from their own corpus. Every message is a claim endorsed only by
/// its author and labeled with the author's group. No social edges are
/// generated (the propagation operator degenerates to the identity).
struct SynthSpec {
    std::size_t k = 4;
    std::size_t users_per_group = 100;
    std::size_t messages_per_user = 10;
    std::size_t vocab_per_corpus = 30;
    std::size_t min_tokens = 8;
    std::size_t max_tokens = 15;
    double overlap_mix = 0.4;
    std::uint64_t seed = 0;

    void validate() const;
};

Dataset generate(const SynthSpec& spec);

}  // namespace bsmf
