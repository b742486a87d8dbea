#include "semaq/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "semaq/xml_tree.hpp"

namespace semaq {

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::synonym: return "synonym";
        case Relation::coordinate: return "coordinate";
        case Relation::hyponym: return "hyponym";
        case Relation::hypernym: return "hypernym";
    }
    return "?";
}

Taxonomy::Taxonomy(std::vector<Synset> synsets) : synsets_(std::move(synsets)) {
    const std::size_t n = synsets_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!by_id_.emplace(synsets_[i].id, i).second) {
            throw TaxonomyError("duplicate synset id '" + synsets_[i].id + "'");
        }
        if (synsets_[i].terms.empty()) {
            throw TaxonomyError("synset '" + synsets_[i].id + "' has no terms");
        }
    }
    parents_.assign(n, std::nullopt);
    children_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        const auto& pid = synsets_[i].parent_id;
        if (!pid) {
            continue;
        }
        auto it = by_id_.find(*pid);
        if (it == by_id_.end()) {
            throw TaxonomyError("synset '" + synsets_[i].id + "' has unknown parent '" + *pid + "'");
        }
        parents_[i] = it->second;
        children_[it->second].push_back(i);
    }

    // Depths, walking each chain up to a root or an already-resolved node.
    std::vector<int> depth(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<std::size_t> chain;
        std::vector<bool> on_chain(n, false);
        std::size_t cur = start;
        while (depth[cur] == 0) {
            if (on_chain[cur]) {
                throw TaxonomyError("parent cycle through synset '" + synsets_[cur].id + "'");
            }
            on_chain[cur] = true;
            chain.push_back(cur);
            if (!parents_[cur]) {
                break;
            }
            cur = *parents_[cur];
        }
        int base = depth[cur];  // 0 when the chain ended at an unresolved root
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            base = (parents_[*it] ? base + 1 : 1);
            depth[*it] = base;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        synsets_[i].depth = depth[i];
        for (auto& term : synsets_[i].terms) {
            term = normalize_keyword(term);
        }
        for (const auto& term : synsets_[i].terms) {
            auto& senses = by_term_[term];
            if (senses.empty() || senses.back() != i) {
                senses.push_back(i);
            }
        }
    }
}

Taxonomy Taxonomy::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.substr(0, kHeader.size()) != kHeader) {
        throw TaxonomyError("missing '" + std::string(kHeader) + "' header");
    }
    std::vector<Synset> synsets;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw TaxonomyError("line " + std::to_string(line_no) + ": expected <id>\\t<parent>\\t<terms>");
        }
        Synset s;
        s.id = line.substr(0, t1);
        const std::string parent = line.substr(t1 + 1, t2 - t1 - 1);
        if (parent != "-") {
            s.parent_id = parent;
        }
        std::string terms = line.substr(t2 + 1);
        std::size_t start = 0;
        while (start <= terms.size()) {
            const std::size_t bar = terms.find('|', start);
            const std::string term = terms.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
            if (!split_words(term).empty()) {
                s.terms.push_back(term);
            }
            if (bar == std::string::npos) {
                break;
            }
            start = bar + 1;
        }
        if (s.id.empty()) {
            throw TaxonomyError("line " + std::to_string(line_no) + ": empty synset id");
        }
        synsets.push_back(std::move(s));
    }
    return Taxonomy(std::move(synsets));
}

Taxonomy Taxonomy::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw TaxonomyError("cannot read taxonomy file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Taxonomy::serialize() const {
    std::string out(kHeader);
    out += '\n';
    for (const auto& s : synsets_) {
        out += s.id;
        out += '\t';
        out += s.parent_id.value_or("-");
        out += '\t';
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            if (i > 0) {
                out += '|';
            }
            out += s.terms[i];
        }
        out += '\n';
    }
    return out;
}

const Synset* Taxonomy::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &synsets_[it->second];
}

std::vector<std::size_t> Taxonomy::senses(std::string_view term) const {
    std::string normalized;
    try {
        normalized = normalize_keyword(term);
    } catch (const std::invalid_argument&) {
        return {};
    }
    auto it = by_term_.find(normalized);
    return it == by_term_.end() ? std::vector<std::size_t>{} : it->second;
}

std::optional<std::size_t> Taxonomy::lcs(std::size_t a, std::size_t b) const {
    int da = synsets_[a].depth;
    int db = synsets_[b].depth;
    while (da > db) {
        a = *parents_[a];
        --da;
    }
    while (db > da) {
        b = *parents_[b];
        --db;
    }
    while (a != b) {
        if (!parents_[a] || !parents_[b]) {
            return std::nullopt;
        }
        a = *parents_[a];
        b = *parents_[b];
    }
    return a;
}

double Taxonomy::sim_wp_senses(std::size_t a, std::size_t b) const {
    const auto common = lcs(a, b);
    if (!common) {
        return 0.0;
    }
    return 2.0 * synsets_[*common].depth / (synsets_[a].depth + synsets_[b].depth);
}

double Taxonomy::dsim_senses(std::size_t original, std::size_t candidate) const {
    const double d_orig = synsets_[original].depth;
    const double d_cand = synsets_[candidate].depth;
    return d_cand / std::max(d_orig, d_cand) * sim_wp_senses(original, candidate);
}

double Taxonomy::sim_wp(std::string_view a, std::string_view b) const {
    double best = 0.0;
    for (std::size_t sa : senses(a)) {
        for (std::size_t sb : senses(b)) {
            best = std::max(best, sim_wp_senses(sa, sb));
        }
    }
    return best;
}

double Taxonomy::dsim(std::string_view original, std::string_view candidate) const {
    double best = 0.0;
    for (std::size_t so : senses(original)) {
        for (std::size_t sc : senses(candidate)) {
            best = std::max(best, dsim_senses(so, sc));
        }
    }
    return best;
}

std::vector<CandidateKeyword> Taxonomy::candidates(std::string_view term) const {
    const auto own = senses(term);
    if (own.empty()) {
        return {};
    }
    const std::string self = normalize_keyword(term);

    // term -> strongest relation that produced it (enum order breaks ties)
    std::map<std::string, Relation> found;
    auto add = [&](std::size_t synset, Relation rel) {
        for (const auto& t : synsets_[synset].terms) {
            if (t == self) {
                continue;
            }
            auto [it, inserted] = found.emplace(t, rel);
            if (!inserted && rel < it->second) {
                it->second = rel;
            }
        }
    };
    for (std::size_t s : own) {
        add(s, Relation::synonym);
        if (const auto parent = parents_[s]) {
            for (std::size_t sibling : children_[*parent]) {
                if (sibling != s) {
                    add(sibling, Relation::coordinate);
                }
            }
            add(*parent, Relation::hypernym);
        }
        for (std::size_t child : children_[s]) {
            add(child, Relation::hyponym);
        }
    }

    std::vector<CandidateKeyword> out;
    for (const auto& [t, rel] : found) {
        const double d = dsim(self, t);
        if (d > 0.0) {
            out.push_back(CandidateKeyword{t, rel, d});
        }
    }
    return out;
}

}  // namespace semaq
