#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bsmf {

/// Lowercases and splits on whitespace/punctuation boundaries. A leading '#'
/// or '@' stays attached to its word ("#Ukraine" -> "#ukraine"). No stemming,
/// stop words, or embeddings; the similarity measure is purely lexical.
std::vector<std::string> tokenize(std::string_view text);

/// Interns token strings to dense ids shared across a claim corpus.
class Vocabulary {
public:
    std::uint32_t intern(const std::string& token);
    std::size_t size() const { return tokens_.size(); }
    const std::string& token(std::uint32_t id) const { return tokens_[id]; }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> tokens_;
};

/// L2-normalized bag-of-words vector over an interned vocabulary; sparse,
/// sorted by token id. Empty for claims with no tokens (rejected wherever a
/// medoid is required).
class BowVector {
public:
    BowVector() = default;

    /// Counts tokens and normalizes to unit L2 norm.
    static BowVector from_tokens(const std::vector<std::string>& tokens, Vocabulary& vocab);

    bool empty() const { return weights_.empty(); }
    const std::vector<std::pair<std::uint32_t, double>>& weights() const { return weights_; }

private:
    std::vector<std::pair<std::uint32_t, double>> weights_;
};

/// Cosine similarity of two unit vectors; in [0, 1] for non-negative weights.
double cosine(const BowVector& a, const BowVector& b);

}  // namespace bsmf
