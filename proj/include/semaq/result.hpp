#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "semaq/candidates.hpp"
#include "semaq/dewey.hpp"

namespace semaq {

/// Instrumentation shared by every engine. All counts are deterministic for
/// fixed inputs.
struct EngineCounters {
    std::uint64_t list_probes = 0;  // posting-list (or virtual-list) entry reads
    std::uint64_t lca_ops = 0;
    std::uint64_t results_pruned_intra = 0;
    std::uint64_t queries_executed = 0;
    std::uint64_t queries_pruned_inter = 0;
    std::uint64_t batches_pruned = 0;
    std::uint64_t batch_members_pruned = 0;

    EngineCounters& operator+=(const EngineCounters& other);
    friend bool operator==(const EngineCounters&, const EngineCounters&) = default;
};

/// theta = 1 / (log_alpha(distance + 1) + 1). Throws std::invalid_argument
/// unless alpha > 1.
double cohesiveness(std::uint64_t distance, double alpha);

struct Score {
    double theta;
    double sigma;
};

Score score(double query_sim, std::uint64_t distance, double alpha);

/// One tightest SLCA subtree produced by a candidate query.
struct ResultSubtree {
    DeweyCode root;
    /// Tightest match per distinct query keyword, aligned with `keywords`.
    std::vector<DeweyCode> matches;
    std::vector<std::string> keywords;
    std::uint64_t distance = 0;
    double cohesiveness = 1.0;
    double score = 0.0;
    CandidateQuery query;

    friend bool operator==(const ResultSubtree&, const ResultSubtree&) = default;
};

ResultSubtree make_result(const CandidateQuery& query, std::vector<std::string> keywords, DeweyCode root,
                          std::vector<DeweyCode> matches, std::uint64_t distance, double alpha);

/// Total order used for ranking: score desc, query similarity desc, root
/// asc, then query keywords and matches asc so that distinct results never
/// compare equal.
bool result_precedes(const ResultSubtree& a, const ResultSubtree& b);

/// Bounded best-k container. sigma_min() is only defined once k results are
/// held.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) {}

    std::size_t capacity() const { return k_; }
    std::size_t size() const { return entries_.size(); }
    bool full() const { return entries_.size() >= k_; }
    std::optional<double> sigma_min() const;

    /// True when the heap is full and `bound` is strictly below sigma_min,
    /// i.e. nothing scoring at most `bound` can enter.
    bool prunes(double bound) const;

    /// Returns true if the result was kept.
    bool insert(ResultSubtree result);

    /// Held results, best first.
    std::vector<ResultSubtree> entries() const { return {entries_.begin(), entries_.end()}; }

private:
    struct Precedes {
        bool operator()(const ResultSubtree& a, const ResultSubtree& b) const { return result_precedes(a, b); }
    };

    std::size_t k_;
    std::set<ResultSubtree, Precedes> entries_;
};

struct RankedResult {
    std::size_t rank;  // 1 + number of results with a strictly higher score
    ResultSubtree result;
};

/// Assigns ranks to results already ordered by result_precedes.
std::vector<RankedResult> rank_results(std::vector<ResultSubtree> ordered);

}  // namespace semaq
