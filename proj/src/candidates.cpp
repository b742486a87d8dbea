#include "semaq/candidates.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace semaq {

OriginalQuery OriginalQuery::from(const std::vector<std::string>& raw, std::vector<std::string>* warnings) {
    OriginalQuery q;
    for (const auto& kw : raw) {
        std::string normalized = normalize_keyword(kw);
        if (std::find(q.keywords.begin(), q.keywords.end(), normalized) != q.keywords.end()) {
            if (warnings != nullptr) {
                warnings->push_back("duplicate keyword '" + normalized + "' collapsed");
            }
            continue;
        }
        q.keywords.push_back(std::move(normalized));
    }
    if (q.keywords.empty()) {
        throw std::invalid_argument("empty query");
    }
    return q;
}

std::vector<std::string> CandidateQuery::distinct_keywords() const {
    std::vector<std::string> out;
    for (const auto& kw : keywords) {
        if (std::find(out.begin(), out.end(), kw) == out.end()) {
            out.push_back(kw);
        }
    }
    return out;
}

bool query_precedes(const CandidateQuery& a, const CandidateQuery& b) {
    if (a.sim != b.sim) {
        return a.sim > b.sim;
    }
    return a.keywords < b.keywords;
}

CandidateProvider taxonomy_candidates(const Taxonomy& taxonomy) {
    return [&taxonomy](std::string_view keyword) { return taxonomy.candidates(keyword); };
}

std::string_view to_string(MatchState s) {
    switch (s) {
        case MatchState::direct: return "direct-match";
        case MatchState::semantic: return "no-but-semantic-match";
        case MatchState::hard: return "no-match";
    }
    return "?";
}

MatchState NoMatchReport::state() const {
    if (missing.empty()) {
        return MatchState::direct;
    }
    return replaceable.size() == missing.size() ? MatchState::semantic : MatchState::hard;
}

std::vector<std::size_t> NoMatchReport::irreplaceable() const {
    std::vector<std::size_t> out;
    std::set_difference(missing.begin(), missing.end(), replaceable.begin(), replaceable.end(),
                        std::back_inserter(out));
    return out;
}

NoMatchReport diagnose(const OriginalQuery& query, const InvertedIndex& index, const CandidateProvider& provider) {
    NoMatchReport report;
    report.candidates.resize(query.keywords.size());
    for (std::size_t i = 0; i < query.keywords.size(); ++i) {
        if (index.has_keyword(query.keywords[i])) {
            continue;
        }
        report.missing.push_back(i);
        auto& kept = report.candidates[i];
        for (auto& cand : provider(query.keywords[i])) {
            if (cand.dsim > 0.0 && index.has_keyword(cand.term)) {
                kept.push_back(std::move(cand));
            }
        }
        // Best first; ties by term for determinism.
        std::sort(kept.begin(), kept.end(), [](const CandidateKeyword& a, const CandidateKeyword& b) {
            return a.dsim != b.dsim ? a.dsim > b.dsim : a.term < b.term;
        });
        if (!kept.empty()) {
            report.replaceable.push_back(i);
        }
    }
    return report;
}

namespace {

struct Partial {
    double sim;
    std::vector<std::size_t> choice;  // index into each missing position's list
    std::size_t last;                 // last coordinate that may still grow

    bool operator<(const Partial& other) const { return sim < other.sim; }
};

CandidateQuery materialize(const OriginalQuery& query, const NoMatchReport& report,
                           const std::vector<std::size_t>& choice) {
    CandidateQuery q;
    q.keywords = query.keywords;
    q.replaced = report.missing;
    q.sim = 1.0;
    for (std::size_t j = 0; j < report.missing.size(); ++j) {
        const auto& cand = report.candidates[report.missing[j]][choice[j]];
        q.keywords[report.missing[j]] = cand.term;
        q.sim *= cand.dsim;
    }
    return q;
}

}  // namespace

GeneratedQueries generate(const OriginalQuery& query, const NoMatchReport& report, const GenerateOptions& options) {
    GeneratedQueries out;
    switch (report.state()) {
        case MatchState::hard:
            return out;
        case MatchState::direct:
            out.queries.push_back(CandidateQuery{query.keywords, {}, 1.0});
            out.total = 1;
            return out;
        case MatchState::semantic:
            break;
    }

    const std::size_t dims = report.missing.size();
    std::size_t total = 1;
    for (std::size_t pos : report.missing) {
        const std::size_t n = report.candidates[pos].size();
        total = total > std::numeric_limits<std::size_t>::max() / n ? std::numeric_limits<std::size_t>::max()
                                                                    : total * n;
    }
    out.total = total;

    // Best-first walk of the product lattice. Every tuple has a unique parent
    // (decrement its last non-zero coordinate), and per-position lists are
    // sorted by DSim, so pops come out in non-increasing similarity.
    std::priority_queue<Partial> frontier;
    std::vector<std::size_t> origin(dims, 0);
    frontier.push(Partial{materialize(query, report, origin).sim, origin, 0});
    double cutoff = -1.0;
    while (!frontier.empty()) {
        Partial top = frontier.top();
        frontier.pop();
        if (out.queries.size() >= options.max_queries && top.sim < cutoff) {
            break;  // everything left is strictly less similar
        }
        out.queries.push_back(materialize(query, report, top.choice));
        if (out.queries.size() == options.max_queries) {
            cutoff = top.sim;
        }
        for (std::size_t j = top.last; j < dims; ++j) {
            if (top.choice[j] + 1 < report.candidates[report.missing[j]].size()) {
                Partial next = top;
                ++next.choice[j];
                next.last = j;
                next.sim = materialize(query, report, next.choice).sim;
                frontier.push(std::move(next));
            }
        }
    }
    std::sort(out.queries.begin(), out.queries.end(), query_precedes);
    if (out.queries.size() > options.max_queries) {
        out.queries.resize(options.max_queries);
    }
    out.truncated = out.queries.size() < total;
    return out;
}

}  // namespace semaq
