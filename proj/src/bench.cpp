#include "semaq/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace semaq {

namespace {

constexpr std::string_view kMissingTerm = "qterm";
constexpr std::size_t kCandidatesPerSense = 8;
constexpr int kWordsPerNode = 2;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw BenchSpecError(key + ": expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size() || !std::isfinite(out)) {
        throw BenchSpecError(key + ": expected a number, got '" + value + "'");
    }
    return out;
}

std::string vocabulary_word(std::size_t rank) { return "v" + std::to_string(rank); }

/// Upper bound on the node count of a tree with the given fanout and depth.
std::size_t tree_capacity(std::size_t fanout, std::size_t depth) {
    std::size_t total = 0;
    std::size_t level = 1;
    for (std::size_t d = 0; d < depth; ++d) {
        total += level;
        if (total > (1u << 30)) {
            return total;
        }
        level *= fanout;
    }
    return total;
}

BenchSpec at_axis_value(const BenchSpec& spec, double value) {
    BenchSpec s = spec;
    switch (spec.axis) {
        case BenchAxis::query_length: s.query_length = static_cast<std::size_t>(value); break;
        case BenchAxis::k: s.k = static_cast<std::size_t>(value); break;
        case BenchAxis::alpha: s.alpha = value; break;
        case BenchAxis::candidate_count: s.candidate_count = static_cast<std::size_t>(value); break;
    }
    return s;
}

/// The shared query keywords are the top vocabulary ranks; the replacements
/// for the missing keyword are the next in-index words, in groups attached
/// to separate senses so that their similarities differ by group.
void attach_query(const BenchSpec& spec, BenchWorkload& w) {
    const std::size_t shared = spec.query_length - 1;
    std::vector<std::string> raw;
    for (std::size_t r = 0; r < shared; ++r) {
        raw.push_back(vocabulary_word(r));
    }
    raw.emplace_back(kMissingTerm);
    w.query = OriginalQuery::from(raw);

    std::vector<std::string> replacements;
    for (std::size_t r = shared; r < spec.keyword_vocabulary_size && replacements.size() < spec.candidate_count; ++r) {
        if (w.index.has_keyword(vocabulary_word(r))) {
            replacements.push_back(vocabulary_word(r));
        }
    }
    if (replacements.size() < spec.candidate_count) {
        throw BenchSpecError("candidate_count: only " + std::to_string(replacements.size()) +
                             " vocabulary words occur in the generated document");
    }

    std::vector<Synset> synsets;
    const std::size_t groups = (replacements.size() + kCandidatesPerSense - 1) / kCandidatesPerSense;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::string stem = "g" + std::to_string(g) + "_";
        std::optional<std::string> parent;
        for (std::size_t level = 1; level <= g + 1; ++level) {
            Synset s;
            s.id = stem + std::to_string(level);
            s.parent_id = parent;
            s.terms.push_back("qchain" + std::to_string(g) + "x" + std::to_string(level));
            parent = s.id;
            synsets.push_back(std::move(s));
        }
        synsets.push_back(Synset{stem + "sense", parent, {std::string(kMissingTerm)}});
        const std::size_t end = std::min(replacements.size(), (g + 1) * kCandidatesPerSense);
        for (std::size_t i = g * kCandidatesPerSense; i < end; ++i) {
            synsets.push_back(Synset{stem + "c" + std::to_string(i), parent, {replacements[i]}});
        }
    }
    w.taxonomy = Taxonomy(std::move(synsets));
}

}  // namespace

std::string_view to_string(BenchAxis axis) {
    switch (axis) {
        case BenchAxis::query_length: return "query_length";
        case BenchAxis::k: return "k";
        case BenchAxis::alpha: return "alpha";
        case BenchAxis::candidate_count: return "candidate_count";
    }
    return "?";
}

void BenchSpec::validate() const {
    auto positive = [](const char* name, std::uint64_t v) {
        if (v == 0) {
            throw BenchSpecError(std::string(name) + ": must be positive");
        }
    };
    positive("node_count", node_count);
    positive("fanout", fanout);
    positive("depth", depth);
    positive("keyword_vocabulary_size", keyword_vocabulary_size);
    positive("query_length", query_length);
    positive("candidate_count", candidate_count);
    positive("repetitions", repetitions);
    positive("seed", seed);
    positive("k", k);
    if (!(zipf_exponent > 0)) {
        throw BenchSpecError("zipf_exponent: must be positive");
    }
    if (!(alpha > 1)) {
        throw BenchSpecError("alpha: must be greater than 1");
    }
    if (node_count > tree_capacity(fanout, depth)) {
        throw BenchSpecError("node_count: exceeds what fanout and depth allow");
    }
    if (values.empty()) {
        throw BenchSpecError("values: at least one axis value is required");
    }
    if (engines.empty()) {
        throw BenchSpecError("engines: at least one engine is required");
    }
    for (double v : values) {
        if (axis == BenchAxis::alpha) {
            if (!(v > 1)) {
                throw BenchSpecError("values: alpha values must be greater than 1");
            }
        } else if (!(v >= 1) || v != std::floor(v)) {
            throw BenchSpecError("values: " + std::string(to_string(axis)) + " values must be positive integers");
        }
        const BenchSpec s = at_axis_value(*this, v);
        if (s.keyword_vocabulary_size < s.query_length - 1 + s.candidate_count) {
            throw BenchSpecError("keyword_vocabulary_size: too small for query_length and candidate_count");
        }
    }
}

BenchSpec BenchSpec::parse(std::string_view text) {
    BenchSpec spec;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw BenchSpecError("expected key=value, got '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "node_count") {
            spec.node_count = parse_uint(key, value);
        } else if (key == "fanout") {
            spec.fanout = parse_uint(key, value);
        } else if (key == "depth") {
            spec.depth = parse_uint(key, value);
        } else if (key == "keyword_vocabulary_size") {
            spec.keyword_vocabulary_size = parse_uint(key, value);
        } else if (key == "zipf_exponent") {
            spec.zipf_exponent = parse_real(key, value);
        } else if (key == "query_length") {
            spec.query_length = parse_uint(key, value);
        } else if (key == "candidate_count") {
            spec.candidate_count = parse_uint(key, value);
        } else if (key == "repetitions") {
            spec.repetitions = parse_uint(key, value);
        } else if (key == "seed") {
            spec.seed = parse_uint(key, value);
        } else if (key == "k") {
            spec.k = parse_uint(key, value);
        } else if (key == "alpha") {
            spec.alpha = parse_real(key, value);
        } else if (key == "axis") {
            bool found = false;
            for (BenchAxis a : {BenchAxis::query_length, BenchAxis::k, BenchAxis::alpha, BenchAxis::candidate_count}) {
                if (to_string(a) == value) {
                    spec.axis = a;
                    found = true;
                }
            }
            if (!found) {
                throw BenchSpecError("axis: unknown axis '" + value + "'");
            }
        } else if (key == "values") {
            spec.values.clear();
            for (const auto& v : split_list(value)) {
                spec.values.push_back(parse_real(key, v));
            }
        } else if (key == "engines") {
            spec.engines.clear();
            for (const auto& name : split_list(value)) {
                const auto e = parse_engine(name);
                if (!e) {
                    throw BenchSpecError("engines: unknown engine '" + name + "'");
                }
                spec.engines.push_back(*e);
            }
        } else {
            throw BenchSpecError("unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

BenchSpec BenchSpec::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw BenchSpecError("cannot open bench spec " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string bench_document(const BenchSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::vector<double> weights;
    for (std::size_t r = 0; r < spec.keyword_vocabulary_size; ++r) {
        weights.push_back(1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent));
    }
    std::discrete_distribution<std::size_t> pick_word(weights.begin(), weights.end());

    // Random recursive tree: each new node hangs under a uniformly chosen
    // node that still has room below the fanout and depth limits.
    std::vector<std::vector<std::size_t>> children(spec.node_count);
    std::vector<std::size_t> level(spec.node_count, 1);
    std::vector<std::size_t> open;
    if (spec.depth > 1) {
        open.push_back(0);
    }
    for (std::size_t i = 1; i < spec.node_count; ++i) {
        const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
        const std::size_t parent = open[slot];
        children[parent].push_back(i);
        level[i] = level[parent] + 1;
        if (children[parent].size() == spec.fanout) {
            open[slot] = open.back();
            open.pop_back();
        }
        if (level[i] < spec.depth) {
            open.push_back(i);
        }
    }

    std::string xml;
    std::function<void(std::size_t)> emit = [&](std::size_t n) {
        xml += "<n>";
        for (int j = 0; j < kWordsPerNode; ++j) {
            if (j > 0) {
                xml += ' ';
            }
            xml += vocabulary_word(pick_word(rng));
        }
        for (std::size_t c : children[n]) {
            emit(c);
        }
        xml += "</n>";
    };
    emit(0);
    return xml;
}

BenchWorkload make_workload(const BenchSpec& spec) {
    spec.validate();
    BenchWorkload w;
    w.xml = bench_document(spec);
    w.index = InvertedIndex::build(parse_document(w.xml));
    attach_query(spec, w);
    return w;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
    spec.validate();
    BenchWorkload w;
    w.xml = bench_document(spec);
    w.index = InvertedIndex::build(parse_document(w.xml));

    std::vector<BenchRow> rows;
    for (double value : spec.values) {
        const BenchSpec s = at_axis_value(spec, value);
        attach_query(s, w);
        const NoMatchReport report = diagnose(w.query, w.index, taxonomy_candidates(w.taxonomy));
        const GeneratedQueries generated = generate(w.query, report);

        for (Engine engine : spec.engines) {
            SearchOptions options;
            options.k = s.k;
            options.alpha = s.alpha;
            options.engine = engine;
            BenchRow row;
            row.axis_value = value;
            row.engine = engine;
            row.candidates = generated.queries.size();
            double total_ms = 0;
            for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
                EngineCounters counters;
                const auto start = std::chrono::steady_clock::now();
                execute_candidates(generated.queries, w.index, options, counters);
                const auto stop = std::chrono::steady_clock::now();
                total_ms += std::chrono::duration<double, std::milli>(stop - start).count();
                if (rep == 0) {
                    row.counters = counters;
                }
            }
            row.wall_ms = total_ms / static_cast<double>(spec.repetitions);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_bench_table(std::ostream& out, const BenchSpec& spec, const std::vector<BenchRow>& rows) {
    out << "# axis=" << to_string(spec.axis) << " seed=" << spec.seed << " node_count=" << spec.node_count
        << " fanout=" << spec.fanout << " depth=" << spec.depth
        << " keyword_vocabulary_size=" << spec.keyword_vocabulary_size << " zipf_exponent=" << spec.zipf_exponent
        << "\n";
    out << "axis_value\tengine\twall_ms\tlist_probes\tlca_ops\tresults_pruned_intra\tqueries_pruned_inter\t"
           "batches_pruned\n";
    for (const auto& r : rows) {
        char value[32];
        char wall[32];
        std::snprintf(value, sizeof value, "%g", r.axis_value);
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
        out << value << '\t' << to_string(r.engine) << '\t' << wall << '\t' << r.counters.list_probes << '\t'
            << r.counters.lca_ops << '\t' << r.counters.results_pruned_intra << '\t'
            << r.counters.queries_pruned_inter << '\t' << r.counters.batches_pruned << '\n';
    }
}

}  // namespace semaq
