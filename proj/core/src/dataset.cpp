#include "bsmf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_map>

#include <json.hpp>

namespace bsmf {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& message) {
    throw InputError(path + ":" + std::to_string(line_no) + ": " + message);
}

// Calls fn(line_number, fields) for each non-empty row. A first line equal to
// `header` is treated as a header and skipped.
template <typename Fn>
void for_each_csv_row(const std::string& path, const std::string& header, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == header) continue;
        fn(line_no, split_csv_line(line));
    }
}

double parse_count(const std::string& text, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        parse_fail(path, line_no, "expected a number, got \"" + text + "\"");
    }
    return value;
}

std::string json_escape(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

bool Dataset::has_labels() const {
    return std::any_of(labels.begin(), labels.end(), [](int l) { return l >= 0; });
}

std::size_t Dataset::n_labeled() const {
    return static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [](int l) { return l >= 0; }));
}

Dataset ingest(const IngestPaths& paths) {
    Dataset ds;
    std::unordered_map<std::string, std::uint32_t> claim_index;
    std::unordered_map<std::string, std::uint32_t> source_index;

    {  // claims.jsonl defines the claim table
        std::ifstream in(paths.claims);
        if (!in) throw InputError("cannot open " + paths.claims);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                parse_fail(paths.claims, line_no, std::string("invalid JSON: ") + e.what());
            }
            if (!j.contains("claim_id") || !j["claim_id"].is_string()) {
                parse_fail(paths.claims, line_no, "missing string field \"claim_id\"");
            }
            const std::string id = j["claim_id"].get<std::string>();
            if (!claim_index.emplace(id, static_cast<std::uint32_t>(ds.claim_ids.size())).second) {
                parse_fail(paths.claims, line_no, "duplicate claim_id \"" + id + "\"");
            }
            std::string text;
            if (j.contains("text")) {
                if (!j["text"].is_string()) {
                    parse_fail(paths.claims, line_no, "field \"text\" must be a string");
                }
                text = j["text"].get<std::string>();
            }
            ds.claim_ids.push_back(id);
            ds.claim_texts.push_back(text);
            ds.claim_tokens.push_back(tokenize(text));
        }
    }

    {  // incidences define the source table
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for_each_csv_row(paths.incidences, "source_id,claim_id",
                         [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 2 || f[0].empty() || f[1].empty()) {
                parse_fail(paths.incidences, line_no, "expected source_id,claim_id");
            }
            auto [sit, inserted] =
                source_index.emplace(f[0], static_cast<std::uint32_t>(ds.source_ids.size()));
            if (inserted) ds.source_ids.push_back(f[0]);
            auto cit = claim_index.find(f[1]);
            if (cit == claim_index.end()) {
                parse_fail(paths.incidences, line_no,
                           "claim_id \"" + f[1] + "\" is not defined in " + paths.claims);
            }
            seen.insert({sit->second, cit->second});  // duplicates collapse
        });
        ds.incidences.assign(seen.begin(), seen.end());
    }

    if (!paths.edges.empty()) {
        for_each_csv_row(paths.edges, "retweeter_id,author_id,count",
                         [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 3) {
                parse_fail(paths.edges, line_no, "expected retweeter_id,author_id,count");
            }
            auto rit = source_index.find(f[0]);
            auto ait = source_index.find(f[1]);
            if (rit == source_index.end() || ait == source_index.end()) {
                parse_fail(paths.edges, line_no,
                           "source_id \"" + (rit == source_index.end() ? f[0] : f[1]) +
                               "\" does not appear in " + paths.incidences);
            }
            const double count = parse_count(f[2], paths.edges, line_no);
            if (count < 0.0) parse_fail(paths.edges, line_no, "count must be non-negative");
            ds.social_edges.emplace_back(rit->second, ait->second, count);
        });
    }

    ds.labels.assign(ds.claim_ids.size(), -1);
    if (!paths.labels.empty()) {
        for_each_csv_row(paths.labels, "claim_id,region",
                         [&](std::size_t line_no, const std::vector<std::string>& f) {
            if (f.size() != 2) parse_fail(paths.labels, line_no, "expected claim_id,region");
            auto cit = claim_index.find(f[0]);
            if (cit == claim_index.end()) {
                parse_fail(paths.labels, line_no,
                           "claim_id \"" + f[0] + "\" is not defined in " + paths.claims);
            }
            const double region = parse_count(f[1], paths.labels, line_no);
            if (region < 0.0 || region != static_cast<double>(static_cast<int>(region))) {
                parse_fail(paths.labels, line_no, "region must be a non-negative integer");
            }
            if (ds.labels[cit->second] >= 0) {
                parse_fail(paths.labels, line_no, "duplicate label for claim \"" + f[0] + "\"");
            }
            ds.labels[cit->second] = static_cast<int>(region);
        });
    }

    ds.metadata["ingested_from"] = paths.incidences;
    return ds;
}

SparseMatrix build_x(const Dataset& ds) {
    std::vector<SparseEntry> entries;
    entries.reserve(ds.incidences.size());
    for (const auto& [s, c] : ds.incidences) entries.push_back({s, c, 1.0});
    return SparseMatrix::from_entries(ds.n_sources(), ds.n_claims(), std::move(entries));
}

SocialGraph build_graph(const Dataset& ds, bool symmetrize) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    edges.reserve(ds.social_edges.size());
    for (const auto& [r, a, c] : ds.social_edges) edges.emplace_back(r, a, c);
    return SocialGraph::from_edges(ds.n_sources(), edges, symmetrize);
}

std::vector<BowVector> build_bows(const Dataset& ds, Vocabulary& vocab) {
    std::vector<BowVector> bows;
    bows.reserve(ds.n_claims());
    for (const auto& tokens : ds.claim_tokens) {
        bows.push_back(BowVector::from_tokens(tokens, vocab));
    }
    return bows;
}

void write_dataset(const Dataset& ds, const std::string& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "claims.jsonl");
        for (std::size_t j = 0; j < ds.n_claims(); ++j) {
            out << "{\"claim_id\": " << json_escape(ds.claim_ids[j]) << ", \"text\": "
                << json_escape(ds.claim_texts[j]) << "}\n";
        }
    }
    {
        std::ofstream out(fs::path(dir) / "incidences.csv");
        out << "source_id,claim_id\n";
        for (const auto& [s, c] : ds.incidences) {
            out << ds.source_ids[s] << "," << ds.claim_ids[c] << "\n";
        }
    }
    {
        std::ofstream out(fs::path(dir) / "edges.csv");
        out << "retweeter_id,author_id,count\n";
        for (const auto& [r, a, c] : ds.social_edges) {
            out << ds.source_ids[r] << "," << ds.source_ids[a] << "," << c << "\n";
        }
    }
    if (ds.has_labels()) {
        std::ofstream out(fs::path(dir) / "labels.csv");
        out << "claim_id,region\n";
        for (std::size_t j = 0; j < ds.n_claims(); ++j) {
            if (ds.labels[j] >= 0) out << ds.claim_ids[j] << "," << ds.labels[j] << "\n";
        }
    }
    {
        nlohmann::json meta(ds.metadata);
        std::ofstream out(fs::path(dir) / "metadata.json");
        out << meta.dump(2) << "\n";
    }
}

Dataset ingest_dir(const std::string& dir) {
    IngestPaths paths;
    paths.incidences = (fs::path(dir) / "incidences.csv").string();
    paths.claims = (fs::path(dir) / "claims.jsonl").string();
    const auto edges = fs::path(dir) / "edges.csv";
    if (fs::exists(edges)) paths.edges = edges.string();
    const auto labels = fs::path(dir) / "labels.csv";
    if (fs::exists(labels)) paths.labels = labels.string();
    Dataset ds = ingest(paths);
    const auto meta = fs::path(dir) / "metadata.json";
    if (fs::exists(meta)) {
        std::ifstream in(meta);
        nlohmann::json j;
        try {
            in >> j;
            for (const auto& [key, value] : j.items()) {
                ds.metadata[key] = value.is_string() ? value.get<std::string>() : value.dump();
            }
        } catch (const nlohmann::json::exception&) {
            throw InputError("invalid metadata.json in " + dir);
        }
    }
    return ds;
}

}  // namespace bsmf
