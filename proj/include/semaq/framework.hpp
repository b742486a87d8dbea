#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semaq/candidates.hpp"
#include "semaq/result.hpp"

namespace semaq {

enum class Engine { bl, se, an, ba };

std::string_view to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view name);

struct SearchOptions {
    std::size_t k = 10;
    double alpha = 4.0;
    Engine engine = Engine::se;
    /// Stop once the heap is full and the next query's similarity is below
    /// the heap floor.
    bool inter_query_pruning = true;
    /// Abandon a result whose partial score bound is below the heap floor.
    /// The baseline engine never uses it.
    bool intra_query_pruning = true;
    /// Skip batch members (or whole batches) whose upper bound is below the
    /// heap floor.
    bool batch_pruning = true;
    GenerateOptions generate;
};

/// Executes candidate queries (sorted by query_precedes) one at a time with
/// the bl, se or an engine. Returns the final heap, best first.
std::vector<ResultSubtree> run_framework(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                         const SearchOptions& options, EngineCounters& counters);

/// Dispatches to run_framework or the batch engine by options.engine.
std::vector<ResultSubtree> execute_candidates(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                              const SearchOptions& options, EngineCounters& counters);

struct SearchOutcome {
    MatchState state = MatchState::hard;
    NoMatchReport report;
    std::size_t candidate_total = 0;     // full Cartesian product size
    std::size_t candidates_used = 0;     // after the cap
    bool truncated = false;
    std::vector<RankedResult> results;  // rank order
    EngineCounters counters;
};

/// Diagnoses, generates candidate queries and executes them. A hard
/// no-match yields no results and the report explains which positions have
/// no usable candidate. Throws std::invalid_argument unless alpha > 1.
SearchOutcome search(const OriginalQuery& query, const InvertedIndex& index, const CandidateProvider& provider,
                     const SearchOptions& options);

}  // namespace semaq
