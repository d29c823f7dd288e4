#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bsmf/graph.hpp"
#include "bsmf/matrix.hpp"
#include "bsmf/text.hpp"

namespace bsmf {

/// A belief-separation problem instance: sources, claims with token lists,
/// who-endorsed-what incidences, retweet edges, and optional per-claim
/// ground-truth region labels.
struct Dataset {
    std::vector<std::string> source_ids;
    std::vector<std::string> claim_ids;
    std::vector<std::string> claim_texts;                    // raw text, may be empty
    std::vector<std::vector<std::string>> claim_tokens;      // tokenized text
    std::vector<std::pair<std::uint32_t, std::uint32_t>> incidences;  // (source, claim), unique
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> social_edges;  // (retweeter, author, count)
    std::vector<int> labels;  // per claim, -1 when unlabeled; empty when no labels at all
    std::map<std::string, std::string> metadata;

    std::size_t n_sources() const { return source_ids.size(); }
    std::size_t n_claims() const { return claim_ids.size(); }
    bool has_labels() const;
    std::size_t n_labeled() const;
};

struct IngestPaths {
    std::string incidences;        // CSV: source_id,claim_id
    std::string claims;            // JSONL: {"claim_id": str, "text": str}
    std::string edges;             // optional CSV: retweeter_id,author_id,count
    std::string labels;            // optional CSV: claim_id,region
};

/// Parses and cross-validates the dataset files. Malformed rows raise
/// InputError with file and line number; ids referenced but never defined
/// raise a referential error. Duplicate incidences collapse to one.
Dataset ingest(const IngestPaths& paths);

/// Binary source-claim matrix X from the incidence list.
SparseMatrix build_x(const Dataset& ds);

/// Retweet graph A from the edge list (zero matrix when there are no edges).
SocialGraph build_graph(const Dataset& ds, bool symmetrize = false);

/// One normalized bag-of-words vector per claim over a shared vocabulary.
std::vector<BowVector> build_bows(const Dataset& ds, Vocabulary& vocab);

/// Writes incidences.csv, claims.jsonl, edges.csv, labels.csv (when present)
/// and metadata.json into `dir`, the same layout `ingest_dir` reads.
void write_dataset(const Dataset& ds, const std::string& dir);

/// Ingests the conventional directory layout produced by write_dataset.
Dataset ingest_dir(const std::string& dir);

}  // namespace bsmf
