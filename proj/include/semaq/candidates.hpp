#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "semaq/inverted_index.hpp"
#include "semaq/taxonomy.hpp"

namespace semaq {

/// A user query: ordered, normalized, duplicate-free keywords.
struct OriginalQuery {
    std::vector<std::string> keywords;

    /// Normalizes every keyword and collapses duplicates, appending one
    /// warning per dropped duplicate. Throws std::invalid_argument for an
    /// empty query or an empty keyword.
    static OriginalQuery from(const std::vector<std::string>& raw, std::vector<std::string>* warnings = nullptr);
};

/// The original query with some no-match keywords substituted.
struct CandidateQuery {
    std::vector<std::string> keywords;  // same arity as the original
    std::vector<std::size_t> replaced;  // ascending positions
    double sim = 1.0;                   // product of DSim over replaced positions

    /// Keywords with repeats removed, first occurrence wins. A substitution
    /// can duplicate another keyword of the query; execution uses this list.
    std::vector<std::string> distinct_keywords() const;

    friend bool operator==(const CandidateQuery&, const CandidateQuery&) = default;
};

/// Orders queries by similarity descending, then keyword list ascending.
bool query_precedes(const CandidateQuery& a, const CandidateQuery& b);

using CandidateProvider = std::function<std::vector<CandidateKeyword>(std::string_view)>;

/// Candidate provider backed by a taxonomy (synonyms, coordinate terms,
/// direct hyponyms and hypernyms).
CandidateProvider taxonomy_candidates(const Taxonomy& taxonomy);

enum class MatchState { direct, semantic, hard };

std::string_view to_string(MatchState s);

struct NoMatchReport {
    std::vector<std::size_t> missing;      // positions with empty posting lists
    std::vector<std::size_t> replaceable;  // subset of missing with in-index candidates
    /// Index-mapped candidates per position; empty for mapped positions.
    std::vector<std::vector<CandidateKeyword>> candidates;

    MatchState state() const;
    /// Missing positions that have no usable candidate.
    std::vector<std::size_t> irreplaceable() const;
};

NoMatchReport diagnose(const OriginalQuery& query, const InvertedIndex& index, const CandidateProvider& provider);

struct GenerateOptions {
    /// Upper bound on |Q|; the least similar queries are dropped first.
    std::size_t max_queries = 50000;
};

struct GeneratedQueries {
    std::vector<CandidateQuery> queries;  // sorted by query_precedes
    std::size_t total = 0;                // size of the full Cartesian product
    bool truncated = false;
};

/// Cartesian product of the filtered candidate sets over the missing
/// positions, scored and sorted. A direct-match query yields itself with
/// similarity 1. Returns nothing for a hard no-match.
GeneratedQueries generate(const OriginalQuery& query, const NoMatchReport& report,
                          const GenerateOptions& options = {});

}  // namespace semaq
