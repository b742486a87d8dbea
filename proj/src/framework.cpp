#include "semaq/framework.hpp"

#include "semaq/batch.hpp"
#include "semaq/slca.hpp"

namespace semaq {

std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::bl: return "bl";
        case Engine::se: return "se";
        case Engine::an: return "an";
        case Engine::ba: return "ba";
    }
    return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
    for (Engine e : {Engine::bl, Engine::se, Engine::an, Engine::ba}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    return std::nullopt;
}

std::vector<ResultSubtree> run_framework(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                         const SearchOptions& options, EngineCounters& counters) {
    cohesiveness(0, options.alpha);  // validates alpha up front
    TopK topk(options.k);
    if (options.k == 0) {
        return {};
    }
    ExecuteOptions exec;
    exec.traversal = options.engine == Engine::an ? Traversal::anchor : Traversal::scan_eager;
    exec.intra_query_pruning = options.engine != Engine::bl && options.intra_query_pruning;

    for (std::size_t i = 0; i < queries.size(); ++i) {
        // theta <= 1, so no result of this or any later query can beat the floor.
        if (options.inter_query_pruning && topk.prunes(queries[i].sim)) {
            counters.queries_pruned_inter += queries.size() - i;
            break;
        }
        execute_query(queries[i], index, options.alpha, topk, counters, exec);
        ++counters.queries_executed;
    }
    return topk.entries();
}

std::vector<ResultSubtree> execute_candidates(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                              const SearchOptions& options, EngineCounters& counters) {
    if (options.engine == Engine::ba) {
        return run_ba_qp(queries, index, options, counters);
    }
    return run_framework(queries, index, options, counters);
}

SearchOutcome search(const OriginalQuery& query, const InvertedIndex& index, const CandidateProvider& provider,
                     const SearchOptions& options) {
    cohesiveness(0, options.alpha);
    SearchOutcome out;
    out.report = diagnose(query, index, provider);
    out.state = out.report.state();
    if (out.state == MatchState::hard) {
        return out;
    }
    GeneratedQueries generated = generate(query, out.report, options.generate);
    out.candidate_total = generated.total;
    out.candidates_used = generated.queries.size();
    out.truncated = generated.truncated;
    out.results = rank_results(execute_candidates(generated.queries, index, options, out.counters));
    return out;
}

}  // namespace semaq
