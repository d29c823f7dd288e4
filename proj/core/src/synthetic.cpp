#include "bsmf/synthetic.hpp"

#include <random>

namespace bsmf {

namespace {

std::string token_name(std::size_t corpus, std::size_t word) {
    return "c" + std::to_string(corpus) + "w" + std::to_string(word);
}

}  // namespace

void SynthSpec::validate() const {
    if (k < 2) throw InputError("synth: k must be >= 2");
    if (users_per_group < 1) throw InputError("synth: users_per_group must be >= 1");
    if (messages_per_user < 1) throw InputError("synth: messages_per_user must be >= 1");
    if (vocab_per_corpus < 1) {
        throw InputError("synth: vocab_per_corpus too small for disjoint corpora");
    }
    if (min_tokens < 1 || max_tokens < min_tokens) {
        throw InputError("synth: need 1 <= min_tokens <= max_tokens");
    }
    if (!(overlap_mix >= 0.0 && overlap_mix <= 1.0)) {
        throw InputError("synth: overlap_mix must be in [0, 1]");
    }
}

Dataset generate(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<std::size_t> length(spec.min_tokens, spec.max_tokens);
    std::uniform_int_distribution<std::size_t> word(0, spec.vocab_per_corpus - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Dataset ds;
    ds.labels.clear();
    for (std::size_t g = 0; g < spec.k; ++g) {
        for (std::size_t u = 0; u < spec.users_per_group; ++u) {
            const auto source = static_cast<std::uint32_t>(ds.source_ids.size());
            ds.source_ids.push_back("g" + std::to_string(g) + "_u" + std::to_string(u));
            for (std::size_t msg = 0; msg < spec.messages_per_user; ++msg) {
                const auto claim = static_cast<std::uint32_t>(ds.claim_ids.size());
                ds.claim_ids.push_back(ds.source_ids[source] + "_m" + std::to_string(msg));
                std::vector<std::string> tokens;
                const std::size_t n_tokens = length(rng);
                tokens.reserve(n_tokens);
                for (std::size_t t = 0; t < n_tokens; ++t) {
                    // Overlap users speak pure corpus o; b-group users mix it in.
                    const std::size_t corpus =
                        (g == 0 || unit(rng) < spec.overlap_mix) ? 0 : g;
                    tokens.push_back(token_name(corpus, word(rng)));
                }
                std::string text;
                for (std::size_t t = 0; t < tokens.size(); ++t) {
                    if (t > 0) text.push_back(' ');
                    text += tokens[t];
                }
                ds.claim_texts.push_back(std::move(text));
                ds.claim_tokens.push_back(std::move(tokens));
                ds.incidences.emplace_back(source, claim);
                ds.labels.push_back(static_cast<int>(g));
            }
        }
    }

    ds.metadata["generator"] = "synthetic";
    ds.metadata["k"] = std::to_string(spec.k);
    ds.metadata["users_per_group"] = std::to_string(spec.users_per_group);
    ds.metadata["messages_per_user"] = std::to_string(spec.messages_per_user);
    ds.metadata["vocab_per_corpus"] = std::to_string(spec.vocab_per_corpus);
    ds.metadata["min_tokens"] = std::to_string(spec.min_tokens);
    ds.metadata["max_tokens"] = std::to_string(spec.max_tokens);
    ds.metadata["overlap_mix"] = std::to_string(spec.overlap_mix);
    ds.metadata["seed"] = std::to_string(spec.seed);
    return ds;
}

}  // namespace bsmf
