#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semaq {

struct Synset {
    std::string id;
    std::optional<std::string> parent_id;
    std::vector<std::string> terms;  // normalized phrases
    int depth = 1;                   // root depth is 1
};

enum class Relation { synonym, coordinate, hyponym, hypernym };

std::string_view to_string(Relation r);

struct CandidateKeyword {
    std::string term;
    Relation relation = Relation::synonym;
    double dsim = 0.0;

    friend bool operator==(const CandidateKeyword&, const CandidateKeyword&) = default;
};

class TaxonomyError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable synset forest standing in for a lexical knowledge base.
/// Terms are normalized (lowercase words separated by single spaces); a term
/// may belong to several synsets (senses).
class Taxonomy {
public:
    static constexpr std::string_view kHeader = "SEMAQ-TAX v1";

    Taxonomy() = default;
    /// Validates links and computes depths. Throws TaxonomyError on a cycle,
    /// a dangling parent, or a duplicate id.
    explicit Taxonomy(std::vector<Synset> synsets);

    static Taxonomy parse(std::string_view text);
    static Taxonomy load(const std::string& path);
    std::string serialize() const;

    const std::vector<Synset>& synsets() const { return synsets_; }
    const Synset* find(std::string_view id) const;
    /// Synset indices containing `term` (normalized on lookup).
    std::vector<std::size_t> senses(std::string_view term) const;
    bool contains(std::string_view term) const { return !senses(term).empty(); }

    std::optional<std::size_t> parent_of(std::size_t synset) const { return parents_[synset]; }
    const std::vector<std::size_t>& children_of(std::size_t synset) const { return children_[synset]; }

    /// Candidate keywords for `term`: synonyms, coordinate terms, direct
    /// hyponyms and direct hypernyms over every sense, excluding `term`
    /// itself and candidates with zero similarity. Each candidate carries
    /// its best DSim and the relation that produced it; sorted by term.
    std::vector<CandidateKeyword> candidates(std::string_view term) const;

    /// Wu-Palmer similarity maximized over sense pairs; 0 when the terms
    /// share no root (or either term is unknown).
    double sim_wp(std::string_view a, std::string_view b) const;
    /// Depth-penalized Wu-Palmer similarity of `candidate` to `original`,
    /// maximized over sense pairs.
    double dsim(std::string_view original, std::string_view candidate) const;

    /// Per sense pair, exposed for tests.
    double sim_wp_senses(std::size_t a, std::size_t b) const;
    double dsim_senses(std::size_t original, std::size_t candidate) const;
    /// Deepest common ancestor synset of two synsets, if any.
    std::optional<std::size_t> lcs(std::size_t a, std::size_t b) const;

private:
    std::vector<Synset> synsets_;
    std::vector<std::optional<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_term_;
};

}  // namespace semaq
