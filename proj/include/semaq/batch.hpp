#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semaq/framework.hpp"
#include "semaq/slca.hpp"

namespace semaq {

/// Candidate queries that share every keyword but one.
struct QueryBatch {
    std::vector<std::string> shared;        // in the head query's keyword order
    std::vector<CandidateQuery> members;    // query_precedes order; the head first
    std::vector<std::string> unshared;      // one per member
    std::uint64_t cost = 0;                 // shared list sizes plus, per member, min shared size + its own list
    std::size_t removed_position = 0;       // head keyword left out of `shared`

    double unit_cost() const { return static_cast<double>(cost) / static_cast<double>(members.size()); }
};

struct ExecutionPlan {
    std::vector<QueryBatch> batches;

    std::uint64_t total_cost() const;
    std::size_t query_count() const;
};

std::uint64_t batch_cost(std::span<const std::string> shared, std::span<const std::string> unshared,
                         const InvertedIndex& index);

/// True iff `query` holds every shared keyword plus exactly one more.
bool fits_batch(std::span<const std::string> shared, const CandidateQuery& query);

/// Greedy planner. Each call takes the most similar remaining query as head,
/// forms one plausible batch per head keyword (leave it out, collect every
/// remaining query containing the rest) and keeps the cheapest per member;
/// ties go to the earlier keyword position.
class BatchPlanner {
public:
    BatchPlanner(std::span<const CandidateQuery> queries, const InvertedIndex& index);

    bool done() const { return remaining_ == 0; }
    std::size_t remaining() const { return remaining_; }
    const CandidateQuery& head() const;

    /// The plausible batches for the current head, one per keyword position.
    std::vector<QueryBatch> plausible() const;
    QueryBatch next_batch();

private:
    QueryBatch build(std::size_t head, std::size_t position, std::vector<std::size_t>* ids) const;
    void advance_head();

    const InvertedIndex& index_;
    std::vector<CandidateQuery> queries_;
    std::vector<std::vector<std::string>> distinct_;
    std::vector<bool> taken_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_shared_;
    std::size_t head_ = 0;
    std::size_t remaining_ = 0;
};

ExecutionPlan plan_batches(std::span<const CandidateQuery> queries, const InvertedIndex& index);

/// `batch <i> unit_cost=<c> shared=<k,...> members=<sim:keywords;...>`
std::string describe(const QueryBatch& batch, std::size_t ordinal);

/// Tightest shared-keyword matches under one root.
struct SharedResult {
    DeweyCode root;
    std::vector<DeweyCode> matches;  // aligned with QueryBatch::shared
    std::uint64_t distance = 0;
};

struct SharedEntry {
    SharedResult result;
    bool is_slca = false;  // a shared SLCA root rather than an ancestor of one
    bool pruned = false;   // abandoned; no member result may use this root
};

/// Shared-part store: every shared SLCA root and each of its ancestors.
class SharedStore {
public:
    const SharedEntry* find(const DeweyCode& root) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::map<DeweyCode, SharedEntry>& entries() const { return entries_; }

    /// Every stored root in document order (the virtual list for merging).
    std::vector<DeweyCode> roots() const;
    std::vector<DeweyCode> slca_roots() const;
    std::optional<std::uint64_t> min_distance() const;

private:
    friend SharedStore shared_part(const QueryBatch&, const InvertedIndex&, double, const TopK&, EngineCounters&,
                                   bool);
    std::map<DeweyCode, SharedEntry> entries_;
};

/// Computes the shared part once per batch. Entries whose best possible
/// member score (most similar member, shared distance only) is below the
/// heap floor are kept as pruned placeholders.
SharedStore shared_part(const QueryBatch& batch, const InvertedIndex& index, double alpha, const TopK& topk,
                        EngineCounters& counters, bool intra_query_pruning = true);

/// Completes one member: SLCA of its unshared list against the store roots,
/// combined with the stored shared matches.
void merge_results(const QueryBatch& batch, std::size_t member, const SharedStore& store,
                   std::span<const DeweyCode> store_roots, const InvertedIndex& index, double alpha, TopK& topk,
                   EngineCounters& counters, bool intra_query_pruning = true);

/// Upper bound on any result score of a member with similarity `query_sim`:
/// its similarity times the cohesiveness of the smallest stored shared
/// distance. 0 for an empty store.
double batch_upper_bound(double query_sim, const SharedStore& store, double alpha);

/// Batch execution over candidate queries sorted by query_precedes.
std::vector<ResultSubtree> run_ba_qp(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                     const SearchOptions& options, EngineCounters& counters);

}  // namespace semaq
