#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "semaq/inverted_index.hpp"
#include "semaq/result.hpp"

namespace semaq {

/// Read-only view of a sorted code list that charges every entry read to
/// `list_probes`. A null counter sink disables accounting.
class ProbedList {
public:
    ProbedList(std::span<const DeweyCode> entries, EngineCounters* counters)
        : entries_(entries), counters_(counters) {}

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    const DeweyCode& at(std::size_t i) const {
        if (counters_ != nullptr) {
            ++counters_->list_probes;
        }
        return entries_[i];
    }

    /// First position whose entry is not less than `code`.
    std::size_t lower_bound(const DeweyCode& code) const;
    /// First position whose entry is greater than `code`.
    std::size_t upper_bound(const DeweyCode& code) const;

    EngineCounters* counters() const { return counters_; }

private:
    std::span<const DeweyCode> entries_;
    EngineCounters* counters_;
};

/// Depth of lca(a, b), charged as one LCA operation.
std::size_t lca_depth(const DeweyCode& a, const DeweyCode& b, EngineCounters* counters);

/// Position of the entry whose LCA with `m` is deepest, looking only at the
/// document-order neighbours of `m`; ties go to the predecessor. Requires a
/// non-empty list.
std::size_t closest(const DeweyCode& m, const ProbedList& list);
DeweyCode closest(const DeweyCode& m, std::span<const DeweyCode> list);

class InvariantError : public std::logic_error {
    using std::logic_error::logic_error;
};

struct TightMatch {
    std::size_t position;
    DeweyCode code;
    std::uint64_t distance;  // level(code) - level(v)
};

/// Shallowest entry under `v` (ties: first in document order), found by
/// scanning outwards from `cursor` across the contiguous run of entries
/// under `v`. Throws InvariantError when no entry lies under `v`.
TightMatch get_tight(const ProbedList& list, std::size_t cursor, const DeweyCode& v);
TightMatch get_tight(std::span<const DeweyCode> list, std::size_t cursor, const DeweyCode& v);

/// Called once per SLCA root with, per list, a position near the entries
/// that produced it (a starting point for get_tight).
using RootSink = std::function<void(const DeweyCode& root, std::span<const std::size_t> cursors)>;

/// Drives the scan from lists[0]; every entry of it is visited and paired
/// with its closest entry in each other list.
void scan_eager_slca(std::span<const ProbedList> lists, const RootSink& sink);

/// Anchor-driven scan: repeatedly takes the largest entry among the list
/// heads as the anchor and skips every list past it.
void anchor_slca(std::span<const ProbedList> lists, const RootSink& sink);

enum class Traversal { scan_eager, anchor };

struct ExecuteOptions {
    Traversal traversal = Traversal::scan_eager;
    bool intra_query_pruning = true;
};

/// Runs one candidate query: finds its SLCA roots, computes tightest matches
/// list by list (shortest first), abandons a result once its partial score
/// bound falls below the heap floor, and offers the rest to `topk`.
void execute_query(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                   EngineCounters& counters, const ExecuteOptions& options = {});

/// Baseline: scan-eager traversal without intra-query pruning.
void process_query_bl(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters);
/// Scan-eager traversal with intra-query pruning.
void process_query_se(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters);
/// Anchor traversal with intra-query pruning.
void process_query_an(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters);

}  // namespace semaq
