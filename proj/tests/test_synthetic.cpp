#include <doctest.h>

#include <set>

#include "bsmf/synthetic.hpp"

using namespace bsmf;

TEST_CASE("default protocol produces 400 users and 4000 messages") {
    SynthSpec spec;
    const auto ds = generate(spec);
    CHECK(ds.n_sources() == 400);
    CHECK(ds.n_claims() == 4000);
    CHECK(ds.incidences.size() == 4000);
    CHECK(ds.social_edges.empty());
    CHECK(ds.labels.size() == 4000);
}

TEST_CASE("labels follow group sizes exactly") {
    SynthSpec spec;
    spec.k = 3;
    spec.users_per_group = 5;
    spec.messages_per_user = 4;
    const auto ds = generate(spec);
    std::vector<std::size_t> histogram(spec.k, 0);
    for (int label : ds.labels) {
        REQUIRE(label >= 0);
        REQUIRE(static_cast<std::size_t>(label) < spec.k);
        ++histogram[static_cast<std::size_t>(label)];
    }
    for (std::size_t g = 0; g < spec.k; ++g) CHECK(histogram[g] == 20);
}

TEST_CASE("corpora stay disjoint and overlap users speak pure corpus o") {
    SynthSpec spec;
    spec.k = 4;
    spec.users_per_group = 10;
    spec.messages_per_user = 5;
    const auto ds = generate(spec);
    for (std::size_t j = 0; j < ds.n_claims(); ++j) {
        const int g = ds.labels[j];
        for (const auto& token : ds.claim_tokens[j]) {
            REQUIRE(token.size() >= 4);
            REQUIRE(token[0] == 'c');
            const auto w = token.find('w');
            const int corpus = std::stoi(token.substr(1, w - 1));
            if (g == 0) {
                CHECK(corpus == 0);
            } else {
                CHECK((corpus == 0 || corpus == g));
            }
        }
    }
}

TEST_CASE("zero overlap mix keeps b-group messages free of corpus o") {
    SynthSpec spec;
    spec.k = 3;
    spec.users_per_group = 8;
    spec.messages_per_user = 6;
    spec.overlap_mix = 0.0;
    const auto ds = generate(spec);
    for (std::size_t j = 0; j < ds.n_claims(); ++j) {
        if (ds.labels[j] == 0) continue;
        for (const auto& token : ds.claim_tokens[j]) {
            CHECK(token.rfind("c0w", 0) != 0);
        }
    }
}

TEST_CASE("every message is endorsed only by its author") {
    SynthSpec spec;
    spec.k = 2;
    spec.users_per_group = 4;
    spec.messages_per_user = 3;
    const auto ds = generate(spec);
    std::set<std::uint32_t> seen_claims;
    for (const auto& [s, c] : ds.incidences) {
        CHECK(seen_claims.insert(c).second);  // one endorser per claim
        CHECK(ds.claim_ids[c].rfind(ds.source_ids[s] + "_m", 0) == 0);
    }
    CHECK(seen_claims.size() == ds.n_claims());
}

TEST_CASE("generation is deterministic for a fixed seed") {
    SynthSpec spec;
    spec.k = 3;
    spec.users_per_group = 6;
    spec.messages_per_user = 4;
    spec.seed = 12345;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(a.claim_texts == b.claim_texts);
    CHECK(a.incidences == b.incidences);
    CHECK(a.labels == b.labels);

    spec.seed = 54321;
    const auto c = generate(spec);
    CHECK(a.claim_texts != c.claim_texts);
}

TEST_CASE("invalid specs are rejected") {
    SynthSpec spec;
    spec.vocab_per_corpus = 0;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = SynthSpec{};
    spec.k = 1;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = SynthSpec{};
    spec.min_tokens = 9;
    spec.max_tokens = 3;
    CHECK_THROWS_AS(generate(spec), InputError);
    spec = SynthSpec{};
    spec.overlap_mix = 1.5;
    CHECK_THROWS_AS(generate(spec), InputError);
}
