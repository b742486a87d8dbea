#include "semaq/batch.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>

namespace semaq {

namespace {

std::string shared_key(std::vector<std::string> keywords) {
    std::sort(keywords.begin(), keywords.end());
    std::string key;
    for (const auto& kw : keywords) {
        key += kw;
        key += '\x1f';
    }
    return key;
}

std::string join(std::span<const std::string> parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

}  // namespace

std::uint64_t ExecutionPlan::total_cost() const {
    std::uint64_t total = 0;
    for (const auto& b : batches) {
        total += b.cost;
    }
    return total;
}

std::size_t ExecutionPlan::query_count() const {
    std::size_t n = 0;
    for (const auto& b : batches) {
        n += b.members.size();
    }
    return n;
}

std::uint64_t batch_cost(std::span<const std::string> shared, std::span<const std::string> unshared,
                         const InvertedIndex& index) {
    std::uint64_t cost = 0;
    std::uint64_t shortest = shared.empty() ? 0 : std::numeric_limits<std::uint64_t>::max();
    for (const auto& kw : shared) {
        const std::uint64_t n = index.list_size(kw);
        cost += n;
        shortest = std::min(shortest, n);
    }
    for (const auto& kw : unshared) {
        cost += shortest + index.list_size(kw);
    }
    return cost;
}

bool fits_batch(std::span<const std::string> shared, const CandidateQuery& query) {
    const auto keywords = query.distinct_keywords();
    if (keywords.size() != shared.size() + 1) {
        return false;
    }
    return std::all_of(shared.begin(), shared.end(), [&](const std::string& kw) {
        return std::find(keywords.begin(), keywords.end(), kw) != keywords.end();
    });
}

BatchPlanner::BatchPlanner(std::span<const CandidateQuery> queries, const InvertedIndex& index)
    : index_(index), queries_(queries.begin(), queries.end()), taken_(queries.size(), false),
      remaining_(queries.size()) {
    distinct_.reserve(queries_.size());
    for (std::size_t id = 0; id < queries_.size(); ++id) {
        distinct_.push_back(queries_[id].distinct_keywords());
        const auto& kws = distinct_.back();
        for (std::size_t p = 0; p < kws.size(); ++p) {
            std::vector<std::string> rest;
            for (std::size_t j = 0; j < kws.size(); ++j) {
                if (j != p) {
                    rest.push_back(kws[j]);
                }
            }
            by_shared_[shared_key(std::move(rest))].push_back(id);
        }
    }
}

const CandidateQuery& BatchPlanner::head() const { return queries_.at(head_); }

QueryBatch BatchPlanner::build(std::size_t head, std::size_t position, std::vector<std::size_t>* ids) const {
    QueryBatch batch;
    batch.removed_position = position;
    const auto& kws = distinct_[head];
    for (std::size_t j = 0; j < kws.size(); ++j) {
        if (j != position) {
            batch.shared.push_back(kws[j]);
        }
    }
    for (std::size_t id : by_shared_.at(shared_key(batch.shared))) {
        if (taken_[id]) {
            continue;
        }
        batch.members.push_back(queries_[id]);
        if (ids != nullptr) {
            ids->push_back(id);
        }
        for (const auto& kw : distinct_[id]) {
            if (std::find(batch.shared.begin(), batch.shared.end(), kw) == batch.shared.end()) {
                batch.unshared.push_back(kw);
                break;
            }
        }
    }
    batch.cost = batch_cost(batch.shared, batch.unshared, index_);
    return batch;
}

std::vector<QueryBatch> BatchPlanner::plausible() const {
    std::vector<QueryBatch> out;
    for (std::size_t p = 0; p < distinct_.at(head_).size(); ++p) {
        out.push_back(build(head_, p, nullptr));
    }
    return out;
}

QueryBatch BatchPlanner::next_batch() {
    std::vector<QueryBatch> options = plausible();
    std::size_t best = 0;
    for (std::size_t i = 1; i < options.size(); ++i) {
        // Exact comparison of cost/size ratios.
        if (options[i].cost * options[best].members.size() < options[best].cost * options[i].members.size()) {
            best = i;
        }
    }
    std::vector<std::size_t> ids;
    QueryBatch chosen = build(head_, options[best].removed_position, &ids);
    for (std::size_t id : ids) {
        taken_[id] = true;
    }
    remaining_ -= chosen.members.size();
    advance_head();
    return chosen;
}

void BatchPlanner::advance_head() {
    while (head_ < queries_.size() && taken_[head_]) {
        ++head_;
    }
}

ExecutionPlan plan_batches(std::span<const CandidateQuery> queries, const InvertedIndex& index) {
    ExecutionPlan plan;
    BatchPlanner planner(queries, index);
    while (!planner.done()) {
        plan.batches.push_back(planner.next_batch());
    }
    return plan;
}

std::string describe(const QueryBatch& batch, std::size_t ordinal) {
    char cost[64];
    std::snprintf(cost, sizeof cost, "%.2f", batch.unit_cost());
    std::string out = "batch " + std::to_string(ordinal) + " unit_cost=" + cost + " shared=" + join(batch.shared, ',') +
                      " members=";
    for (std::size_t i = 0; i < batch.members.size(); ++i) {
        char sim[32];
        std::snprintf(sim, sizeof sim, "%.4f", batch.members[i].sim);
        if (i > 0) {
            out += ';';
        }
        out += sim;
        out += ':';
        out += join(batch.members[i].keywords, ',');
    }
    return out;
}

const SharedEntry* SharedStore::find(const DeweyCode& root) const {
    auto it = entries_.find(root);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<DeweyCode> SharedStore::roots() const {
    std::vector<DeweyCode> out;
    out.reserve(entries_.size());
    for (const auto& [root, entry] : entries_) {
        out.push_back(root);
    }
    return out;
}

std::vector<DeweyCode> SharedStore::slca_roots() const {
    std::vector<DeweyCode> out;
    for (const auto& [root, entry] : entries_) {
        if (entry.is_slca) {
            out.push_back(root);
        }
    }
    return out;
}

std::optional<std::uint64_t> SharedStore::min_distance() const {
    std::optional<std::uint64_t> best;
    for (const auto& [root, entry] : entries_) {
        if (!best || entry.result.distance < *best) {
            best = entry.result.distance;
        }
    }
    return best;
}

SharedStore shared_part(const QueryBatch& batch, const InvertedIndex& index, double alpha, const TopK& topk,
                        EngineCounters& counters, bool intra_query_pruning) {
    SharedStore store;
    if (batch.shared.empty() || batch.members.empty()) {
        return store;
    }
    const std::size_t n = batch.shared.size();
    std::vector<const PostingList*> postings;
    for (const auto& kw : batch.shared) {
        postings.push_back(&index.postings(kw));
        if (postings.back()->empty()) {
            return store;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return postings[a]->size() < postings[b]->size(); });
    std::vector<ProbedList> lists;
    for (std::size_t idx : order) {
        lists.emplace_back(postings[idx]->view(), &counters);
    }

    // Shared SLCA roots, then every ancestor of each.
    auto& entries = store.entries_;
    anchor_slca(lists, [&](const DeweyCode& root, std::span<const std::size_t>) {
        entries[root].is_slca = true;
        for (std::uint32_t level = root.level() - 1; level >= 1; --level) {
            if (!entries.try_emplace(root.prefix(level)).second) {
                break;  // its ancestors are already present
            }
        }
    });
    for (auto& [root, entry] : entries) {
        entry.result.root = root;
        entry.result.matches.assign(n, DeweyCode{});
    }

    // One sequential pass per shared list fills the shallowest match under
    // every stored root; the first entry seen wins level ties.
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t slot = order[j];
        const ProbedList& list = lists[j];
        for (std::size_t i = 0; i < list.size(); ++i) {
            const DeweyCode& e = list.at(i);
            for (std::uint32_t level = 1; level <= e.level(); ++level) {
                auto it = entries.find(e.prefix(level));
                if (it == entries.end()) {
                    continue;
                }
                DeweyCode& best = it->second.result.matches[slot];
                if (best.empty() || e.level() < best.level()) {
                    best = e;
                }
            }
        }
    }

    const double best_sim = batch.members.front().sim;
    for (auto& [root, entry] : entries) {
        std::uint64_t d = 0;
        for (const auto& m : entry.result.matches) {
            d += m.level() - root.level();
        }
        entry.result.distance = d;
        if (intra_query_pruning && topk.prunes(score(best_sim, d, alpha).sigma)) {
            entry.pruned = true;
            ++counters.results_pruned_intra;
        }
    }
    return store;
}

void merge_results(const QueryBatch& batch, std::size_t member, const SharedStore& store,
                   std::span<const DeweyCode> store_roots, const InvertedIndex& index, double alpha, TopK& topk,
                   EngineCounters& counters, bool intra_query_pruning) {
    const CandidateQuery& query = batch.members.at(member);
    const std::string& unshared = batch.unshared.at(member);
    const PostingList& own = index.postings(unshared);
    if (own.empty() || store_roots.empty()) {
        return;
    }
    const std::vector<std::string> keywords = query.distinct_keywords();
    const ProbedList lists[] = {ProbedList(own.view(), &counters), ProbedList(store_roots, &counters)};

    anchor_slca(lists, [&](const DeweyCode& root, std::span<const std::size_t> cursors) {
        const SharedEntry* entry = store.find(root);
        if (entry == nullptr) {
            throw InvariantError("merged root " + root.str() + " missing from the shared store");
        }
        if (entry->pruned) {
            ++counters.results_pruned_intra;
            return;
        }
        std::uint64_t distance = entry->result.distance;
        if (intra_query_pruning && topk.prunes(score(query.sim, distance, alpha).sigma)) {
            ++counters.results_pruned_intra;
            return;
        }
        TightMatch t = get_tight(lists[0], cursors[0], root);
        distance += t.distance;
        std::vector<DeweyCode> matches;
        matches.reserve(keywords.size());
        for (const auto& kw : keywords) {
            if (kw == unshared) {
                matches.push_back(t.code);
                continue;
            }
            const auto pos = std::find(batch.shared.begin(), batch.shared.end(), kw) - batch.shared.begin();
            matches.push_back(entry->result.matches[static_cast<std::size_t>(pos)]);
        }
        topk.insert(make_result(query, keywords, root, std::move(matches), distance, alpha));
    });
}

double batch_upper_bound(double query_sim, const SharedStore& store, double alpha) {
    const auto d = store.min_distance();
    return d ? score(query_sim, *d, alpha).sigma : 0.0;
}

std::vector<ResultSubtree> run_ba_qp(std::span<const CandidateQuery> queries, const InvertedIndex& index,
                                     const SearchOptions& options, EngineCounters& counters) {
    cohesiveness(0, options.alpha);
    TopK topk(options.k);
    if (options.k == 0) {
        return {};
    }
    const ExecuteOptions direct{Traversal::scan_eager, options.intra_query_pruning};
    BatchPlanner planner(queries, index);
    while (!planner.done()) {
        if (options.inter_query_pruning && topk.prunes(planner.head().sim)) {
            counters.queries_pruned_inter += planner.remaining();
            break;
        }
        const QueryBatch batch = planner.next_batch();
        SharedStore store;
        std::vector<DeweyCode> roots;
        if (!batch.shared.empty()) {
            store = shared_part(batch, index, options.alpha, topk, counters, options.intra_query_pruning);
            roots = store.roots();
        }
        for (std::size_t i = 0; i < batch.members.size(); ++i) {
            const CandidateQuery& member = batch.members[i];
            // Single-keyword members share nothing; their bound is the similarity itself.
            const double bound =
                batch.shared.empty() ? member.sim : batch_upper_bound(member.sim, store, options.alpha);
            if (options.batch_pruning && topk.prunes(bound)) {
                if (i == 0) {
                    ++counters.batches_pruned;
                }
                counters.batch_members_pruned += batch.members.size() - i;
                break;
            }
            if (batch.shared.empty()) {
                execute_query(member, index, options.alpha, topk, counters, direct);
            } else {
                merge_results(batch, i, store, roots, index, options.alpha, topk, counters,
                              options.intra_query_pruning);
            }
            ++counters.queries_executed;
        }
    }
    return topk.entries();
}

}  // namespace semaq
