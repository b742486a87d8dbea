#include "semaq/result.hpp"

#include <cmath>
#include <stdexcept>

namespace semaq {

EngineCounters& EngineCounters::operator+=(const EngineCounters& other) {
    list_probes += other.list_probes;
    lca_ops += other.lca_ops;
    results_pruned_intra += other.results_pruned_intra;
    queries_executed += other.queries_executed;
    queries_pruned_inter += other.queries_pruned_inter;
    batches_pruned += other.batches_pruned;
    batch_members_pruned += other.batch_members_pruned;
    return *this;
}

double cohesiveness(std::uint64_t distance, double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be a finite number greater than 1");
    }
    return 1.0 / (std::log(static_cast<double>(distance) + 1.0) / std::log(alpha) + 1.0);
}

Score score(double query_sim, std::uint64_t distance, double alpha) {
    const double theta = cohesiveness(distance, alpha);
    return Score{theta, query_sim * theta};
}

ResultSubtree make_result(const CandidateQuery& query, std::vector<std::string> keywords, DeweyCode root,
                          std::vector<DeweyCode> matches, std::uint64_t distance, double alpha) {
    const Score s = score(query.sim, distance, alpha);
    return ResultSubtree{std::move(root), std::move(matches), std::move(keywords), distance, s.theta, s.sigma, query};
}

bool result_precedes(const ResultSubtree& a, const ResultSubtree& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    if (a.query.sim != b.query.sim) {
        return a.query.sim > b.query.sim;
    }
    if (a.root != b.root) {
        return a.root < b.root;
    }
    if (a.query.keywords != b.query.keywords) {
        return a.query.keywords < b.query.keywords;
    }
    return a.matches < b.matches;
}

std::optional<double> TopK::sigma_min() const {
    if (k_ == 0 || !full()) {
        return std::nullopt;
    }
    return std::prev(entries_.end())->score;
}

bool TopK::prunes(double bound) const {
    const auto floor = sigma_min();
    return floor.has_value() && bound < *floor;
}

bool TopK::insert(ResultSubtree result) {
    if (k_ == 0) {
        return false;
    }
    if (full() && !result_precedes(result, *std::prev(entries_.end()))) {
        return false;
    }
    const bool added = entries_.insert(std::move(result)).second;
    if (entries_.size() > k_) {
        entries_.erase(std::prev(entries_.end()));
    }
    return added;
}

std::vector<RankedResult> rank_results(std::vector<ResultSubtree> ordered) {
    std::vector<RankedResult> out;
    out.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const std::size_t rank = (i > 0 && ordered[i].score == ordered[i - 1].score) ? out.back().rank : i + 1;
        out.push_back(RankedResult{rank, std::move(ordered[i])});
    }
    return out;
}

}  // namespace semaq
