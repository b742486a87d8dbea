#include "random_instance.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "oracle.hpp"

namespace semaq::testing {

namespace {

std::vector<std::string> words(const char* prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

const std::vector<std::string>& doc_words() {
    static const std::vector<std::string> w = words("w", 12);
    return w;
}

const std::vector<std::string>& absent_words() {
    static const std::vector<std::string> z = words("z", 10);
    return z;
}

Taxonomy random_taxonomy(std::mt19937_64& rng, std::size_t count) {
    std::vector<std::string> vocab = doc_words();
    vocab.insert(vocab.end(), absent_words().begin(), absent_words().end());
    std::uniform_int_distribution<std::size_t> pick_term(0, vocab.size() - 1);
    std::bernoulli_distribution is_root(0.15);
    std::bernoulli_distribution two_terms(0.3);

    std::vector<Synset> synsets;
    for (std::size_t i = 0; i < count; ++i) {
        Synset s;
        s.id = "s" + std::to_string(i);
        if (i > 0 && !is_root(rng)) {
            s.parent_id = "s" + std::to_string(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
        }
        s.terms.push_back(vocab[pick_term(rng)]);
        if (two_terms(rng)) {
            std::string second = vocab[pick_term(rng)];
            if (second != s.terms[0]) {
                s.terms.push_back(second);
            }
        }
        synsets.push_back(std::move(s));
    }
    return Taxonomy(std::move(synsets));
}

}  // namespace

std::string random_document(std::uint64_t seed, std::size_t nodes, const std::vector<std::string>& vocabulary) {
    std::mt19937_64 rng(seed);
    std::vector<double> weights;
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        weights.push_back(1.0 / static_cast<double>(i + 1));
    }
    std::discrete_distribution<std::size_t> pick_word(weights.begin(), weights.end());
    std::uniform_int_distribution<int> word_count(0, 2);

    std::vector<std::vector<std::size_t>> children(nodes);
    for (std::size_t i = 1; i < nodes; ++i) {
        // Bias toward recent nodes to get some depth.
        const std::size_t lo = i > 6 ? i - 6 : 0;
        children[std::uniform_int_distribution<std::size_t>(lo, i - 1)(rng)].push_back(i);
    }
    std::vector<std::string> text(nodes);
    for (auto& t : text) {
        for (int j = word_count(rng); j > 0; --j) {
            if (!t.empty()) {
                t += ' ';
            }
            t += vocabulary[pick_word(rng)];
        }
    }
    std::string xml;
    std::function<void(std::size_t)> emit = [&](std::size_t n) {
        xml += "<x>";
        xml += text[n];
        for (std::size_t c : children[n]) {
            emit(c);
        }
        xml += "</x>";
    };
    emit(0);
    return xml;
}

RandomInstance random_instance(std::uint64_t seed, const InstanceShape& shape) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
    const std::size_t ks[] = {1, 3, 10};
    const double alphas[] = {2.0, 4.0, 16.0};
    for (int attempt = 0;; ++attempt) {
        RandomInstance inst;
        inst.seed = seed;
        inst.k = ks[rng() % 3];
        inst.alpha = alphas[rng() % 3];
        const std::size_t nodes = std::uniform_int_distribution<std::size_t>(5, shape.max_nodes)(rng);
        inst.xml = random_document(rng(), nodes, doc_words());
        inst.tree = parse_document(inst.xml);
        inst.index = InvertedIndex::build(inst.tree);
        inst.taxonomy = random_taxonomy(rng, std::uniform_int_distribution<std::size_t>(5, shape.synsets)(rng));

        std::vector<std::string> present;
        for (const auto& w : doc_words()) {
            if (inst.index.has_keyword(w)) {
                present.push_back(w);
            }
        }
        std::vector<std::string> missing;
        for (const auto& z : absent_words()) {
            if (inst.taxonomy.contains(z)) {
                missing.push_back(z);
            }
        }
        const auto provider = taxonomy_candidates(inst.taxonomy);
        for (int tries = 0; tries < 20; ++tries) {
            std::shuffle(present.begin(), present.end(), rng);
            std::shuffle(missing.begin(), missing.end(), rng);
            const std::size_t len = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
            const bool direct = rng() % 10 == 0;
            const std::size_t n_missing = direct ? 0 : std::min<std::size_t>(1 + rng() % 2, missing.size());
            if (!direct && n_missing == 0) {
                break;
            }
            if (len - n_missing > present.size()) {
                continue;
            }
            std::vector<std::string> raw(present.begin(), present.begin() + static_cast<long>(len - n_missing));
            raw.insert(raw.end(), missing.begin(), missing.begin() + static_cast<long>(n_missing));
            std::shuffle(raw.begin(), raw.end(), rng);
            inst.query = OriginalQuery::from(raw);
            const auto queries = oracle::all_candidate_queries(inst.query, inst.index, provider);
            if (!queries.empty() && queries.size() <= shape.max_queries) {
                return inst;
            }
        }
    }
}

}  // namespace semaq::testing
