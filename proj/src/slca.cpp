#include "semaq/slca.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace semaq {

std::size_t ProbedList::lower_bound(const DeweyCode& code) const {
    std::size_t lo = 0;
    std::size_t hi = entries_.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (at(mid) < code) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::size_t ProbedList::upper_bound(const DeweyCode& code) const {
    std::size_t lo = 0;
    std::size_t hi = entries_.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (code < at(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

std::size_t lca_depth(const DeweyCode& a, const DeweyCode& b, EngineCounters* counters) {
    if (counters != nullptr) {
        ++counters->lca_ops;
    }
    return common_prefix_length(a, b);
}

namespace {

struct Neighbour {
    std::size_t position;
    std::size_t depth;  // depth of the LCA with the probe
};

Neighbour closest_neighbour(const DeweyCode& m, const ProbedList& list) {
    const std::size_t pos = list.lower_bound(m);
    std::optional<Neighbour> best;
    if (pos > 0) {
        best = Neighbour{pos - 1, lca_depth(m, list.at(pos - 1), list.counters())};
    }
    if (pos < list.size()) {
        const std::size_t depth = lca_depth(m, list.at(pos), list.counters());
        if (!best || depth > best->depth) {
            best = Neighbour{pos, depth};
        }
    }
    if (!best) {
        throw InvariantError("closest() on an empty list");
    }
    return *best;
}

/// Streams candidate roots (produced for increasing probe nodes) and emits
/// those that no later candidate descends from.
class RootStream {
public:
    explicit RootStream(const RootSink& sink) : sink_(sink) {}

    void offer(DeweyCode candidate, const std::vector<std::size_t>& cursors) {
        if (!pending_) {
            pending_ = std::move(candidate);
            cursors_ = cursors;
        } else if (candidate == *pending_ || candidate.is_ancestor_of(*pending_)) {
            return;
        } else if (pending_->is_ancestor_of(candidate)) {
            pending_ = std::move(candidate);
            cursors_ = cursors;
        } else {
            sink_(*pending_, cursors_);
            pending_ = std::move(candidate);
            cursors_ = cursors;
        }
    }

    void finish() {
        if (pending_) {
            sink_(*pending_, cursors_);
            pending_.reset();
        }
    }

private:
    const RootSink& sink_;
    std::optional<DeweyCode> pending_;
    std::vector<std::size_t> cursors_;
};

}  // namespace

std::size_t closest(const DeweyCode& m, const ProbedList& list) { return closest_neighbour(m, list).position; }

DeweyCode closest(const DeweyCode& m, std::span<const DeweyCode> list) {
    const ProbedList probed(list, nullptr);
    return list[closest(m, probed)];
}

TightMatch get_tight(const ProbedList& list, std::size_t cursor, const DeweyCode& v) {
    if (list.empty()) {
        throw InvariantError("get_tight() on an empty list");
    }
    cursor = std::min(cursor, list.size() - 1);
    if (!v.is_ancestor_or_self_of(list.at(cursor))) {
        cursor = list.lower_bound(v);
        if (cursor == list.size() || !v.is_ancestor_or_self_of(list.at(cursor))) {
            throw InvariantError("no entry under " + v.str());
        }
    }
    std::size_t best = cursor;
    std::uint32_t best_level = list.at(cursor).level();
    for (std::size_t i = cursor; i-- > 0;) {
        const DeweyCode& e = list.at(i);
        if (!v.is_ancestor_or_self_of(e)) {
            break;
        }
        if (e.level() <= best_level) {  // earlier in document order wins ties
            best = i;
            best_level = e.level();
        }
    }
    for (std::size_t i = cursor + 1; i < list.size(); ++i) {
        const DeweyCode& e = list.at(i);
        if (!v.is_ancestor_or_self_of(e)) {
            break;
        }
        if (e.level() < best_level) {
            best = i;
            best_level = e.level();
        }
    }
    const DeweyCode code = list.at(best);
    return TightMatch{best, code, code.level() - v.level()};
}

TightMatch get_tight(std::span<const DeweyCode> list, std::size_t cursor, const DeweyCode& v) {
    return get_tight(ProbedList(list, nullptr), cursor, v);
}

void scan_eager_slca(std::span<const ProbedList> lists, const RootSink& sink) {
    if (lists.empty() || std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); })) {
        return;
    }
    RootStream stream(sink);
    std::vector<std::size_t> cursors(lists.size(), 0);
    const ProbedList& driver = lists[0];
    for (std::size_t i = 0; i < driver.size(); ++i) {
        const DeweyCode& m = driver.at(i);
        cursors[0] = i;
        std::size_t depth = m.level();
        for (std::size_t j = 1; j < lists.size(); ++j) {
            const Neighbour n = closest_neighbour(m, lists[j]);
            cursors[j] = n.position;
            depth = std::min(depth, n.depth);
        }
        stream.offer(m.prefix(depth), cursors);
    }
    stream.finish();
}

void anchor_slca(std::span<const ProbedList> lists, const RootSink& sink) {
    if (lists.empty()) {
        return;
    }
    RootStream stream(sink);
    std::vector<std::size_t> heads(lists.size(), 0);
    std::vector<std::size_t> cursors(lists.size(), 0);
    while (true) {
        // Anchor: the document-order maximum of the list heads.
        std::size_t a = lists.size();
        const DeweyCode* anchor = nullptr;
        for (std::size_t j = 0; j < lists.size(); ++j) {
            if (heads[j] >= lists[j].size()) {
                stream.finish();
                return;
            }
            const DeweyCode& head = lists[j].at(heads[j]);
            if (anchor == nullptr || *anchor < head) {
                anchor = &head;
                a = j;
            }
        }
        std::size_t depth = anchor->level();
        for (std::size_t j = 0; j < lists.size(); ++j) {
            if (j == a) {
                cursors[j] = heads[j];
                continue;
            }
            const Neighbour n = closest_neighbour(*anchor, lists[j]);
            cursors[j] = n.position;
            depth = std::min(depth, n.depth);
        }
        const DeweyCode consumed = *anchor;
        stream.offer(consumed.prefix(depth), cursors);
        ++heads[a];
        for (std::size_t j = 0; j < lists.size(); ++j) {
            if (j != a) {
                heads[j] = std::max(heads[j], lists[j].upper_bound(consumed));
            }
        }
    }
}

void execute_query(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                   EngineCounters& counters, const ExecuteOptions& options) {
    const std::vector<std::string> keywords = query.distinct_keywords();
    std::vector<const PostingList*> postings;
    postings.reserve(keywords.size());
    for (const auto& kw : keywords) {
        postings.push_back(&index.postings(kw));
        if (postings.back()->empty()) {
            return;
        }
    }
    std::vector<std::size_t> order(keywords.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return postings[a]->size() < postings[b]->size(); });
    std::vector<ProbedList> lists;
    lists.reserve(order.size());
    for (std::size_t idx : order) {
        lists.emplace_back(postings[idx]->view(), &counters);
    }

    const RootSink sink = [&](const DeweyCode& root, std::span<const std::size_t> cursors) {
        std::vector<DeweyCode> matches(keywords.size());
        std::uint64_t distance = 0;
        for (std::size_t j = 0; j < lists.size(); ++j) {
            TightMatch t = get_tight(lists[j], cursors[j], root);
            distance += t.distance;
            matches[order[j]] = std::move(t.code);
            if (options.intra_query_pruning && topk.prunes(score(query.sim, distance, alpha).sigma)) {
                ++counters.results_pruned_intra;
                return;
            }
        }
        topk.insert(make_result(query, keywords, root, std::move(matches), distance, alpha));
    };

    if (options.traversal == Traversal::anchor) {
        anchor_slca(lists, sink);
    } else {
        scan_eager_slca(lists, sink);
    }
}

void process_query_bl(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters) {
    execute_query(query, index, alpha, topk, counters, {Traversal::scan_eager, false});
}

void process_query_se(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters) {
    execute_query(query, index, alpha, topk, counters, {Traversal::scan_eager, true});
}

void process_query_an(const CandidateQuery& query, const InvertedIndex& index, double alpha, TopK& topk,
                      EngineCounters& counters) {
    execute_query(query, index, alpha, topk, counters, {Traversal::anchor, true});
}

}  // namespace semaq
