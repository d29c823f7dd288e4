#include "bsmf/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace bsmf {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0 || c == '_'; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    bool prefix_only = false;  // current holds just '#' or '@'
    auto flush = [&] {
        if (!current.empty() && !prefix_only) tokens.push_back(current);
        current.clear();
        prefix_only = false;
    };
    for (char ch : text) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (is_word_char(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
            prefix_only = false;
        } else if ((ch == '#' || ch == '@') && current.empty()) {
            current.push_back(ch);
            prefix_only = true;
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::uint32_t Vocabulary::intern(const std::string& token) {
    auto [it, inserted] = ids_.emplace(token, static_cast<std::uint32_t>(tokens_.size()));
    if (inserted) tokens_.push_back(token);
    return it->second;
}

BowVector BowVector::from_tokens(const std::vector<std::string>& tokens, Vocabulary& vocab) {
    std::map<std::uint32_t, double> counts;
    for (const auto& t : tokens) counts[vocab.intern(t)] += 1.0;
    BowVector bow;
    if (counts.empty()) return bow;
    double norm_sq = 0.0;
    for (const auto& [id, c] : counts) norm_sq += c * c;
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    bow.weights_.reserve(counts.size());
    for (const auto& [id, c] : counts) bow.weights_.emplace_back(id, c * inv_norm);
    return bow;
}

double cosine(const BowVector& a, const BowVector& b) {
    const auto& wa = a.weights();
    const auto& wb = b.weights();
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < wa.size() && j < wb.size()) {
        if (wa[i].first == wb[j].first) {
            sum += wa[i].second * wb[j].second;
            ++i;
            ++j;
        } else if (wa[i].first < wb[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return std::min(sum, 1.0);
}

}  // namespace bsmf
