#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "semaq/batch.hpp"
#include "semaq/bench.hpp"
#include "semaq/framework.hpp"
#include "semaq/inverted_index.hpp"
#include "semaq/taxonomy.hpp"
#include "semaq/xml_tree.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNoMatch = 3 };

/// Raised for bad input files; maps to exit status 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QueryArgs {
    std::string index_path;
    std::string taxonomy_path;
    std::size_t k = 10;
    double alpha = 4.0;
    std::string engine = "se";
    bool json = false;
    std::size_t max_queries = 50000;
    std::vector<std::string> keywords;
};

void add_query_flags(CLI::App* cmd, QueryArgs& args) {
    cmd->add_option("-i,--index", args.index_path, "Index file")->required();
    cmd->add_option("-t,--taxonomy", args.taxonomy_path, "Taxonomy file");
    cmd->add_option("-k,--k", args.k, "Number of results")->capture_default_str();
    cmd->add_option("--alpha", args.alpha, "Cohesiveness base, > 1")->capture_default_str();
    cmd->add_option("--max-queries", args.max_queries, "Cap on generated candidate queries")->capture_default_str();
    cmd->add_option("keywords", args.keywords, "Query keywords (quote multi-word ones)")->required();
}

semaq::InvertedIndex load_index(const std::string& path) {
    try {
        return semaq::InvertedIndex::load(path);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

semaq::Taxonomy load_taxonomy(const std::string& path) {
    if (path.empty()) {
        return {};
    }
    try {
        return semaq::Taxonomy::load(path);
    } catch (const std::exception& e) {
        throw DataError(e.what());
    }
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i > 0 ? sep : "") + parts[i];
    }
    return out;
}

/// Prints the diagnosis for a query no candidate can rescue.
void report_hard(const semaq::OriginalQuery& query, const semaq::NoMatchReport& report) {
    std::vector<std::string> names;
    for (std::size_t pos : report.irreplaceable()) {
        names.push_back("'" + query.keywords[pos] + "'");
    }
    std::cerr << "no match: no in-index replacement for " << join(names, ", ") << "\n";
}

struct Prepared {
    semaq::InvertedIndex index;
    semaq::Taxonomy taxonomy;
    semaq::OriginalQuery query;
};

Prepared prepare(const QueryArgs& args) {
    if (args.k == 0) {
        throw CLI::ValidationError("--k", "must be positive");
    }
    if (!(args.alpha > 1)) {
        throw CLI::ValidationError("--alpha", "must be greater than 1");
    }
    if (args.max_queries == 0) {
        throw CLI::ValidationError("--max-queries", "must be positive");
    }
    Prepared p;
    std::vector<std::string> warnings;
    try {
        p.query = semaq::OriginalQuery::from(args.keywords, &warnings);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("keywords", e.what());
    }
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    p.index = load_index(args.index_path);
    p.taxonomy = load_taxonomy(args.taxonomy_path);
    for (const auto& kw : p.query.keywords) {
        if (!p.index.can_resolve(kw)) {
            std::cerr << "warning: phrase '" << kw << "' was not registered when the index was built\n";
        }
    }
    return p;
}

int cmd_index(const std::string& xml_path, const std::string& out_path, const std::string& taxonomy_path,
              std::vector<std::string> phrases, bool no_tags) {
    semaq::XmlTree tree;
    semaq::Taxonomy taxonomy;
    try {
        tree = semaq::parse_file(xml_path);
        taxonomy = load_taxonomy(taxonomy_path);
    } catch (const semaq::XmlParseError& e) {
        std::cerr << xml_path << ": " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kData;
    }
    for (const auto& synset : taxonomy.synsets()) {
        for (const auto& term : synset.terms) {
            if (term.find(' ') != std::string::npos) {
                phrases.push_back(term);
            }
        }
    }
    semaq::TokenizeOptions options;
    options.include_tag_names = !no_tags;
    semaq::InvertedIndex index = semaq::InvertedIndex::build(tree, phrases, options);
    index.set_source_path(xml_path);
    try {
        index.save(out_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kData;
    }
    const auto& meta = index.meta();
    std::cout << "node_count=" << meta.node_count << " max_depth=" << meta.max_depth
              << " keyword_count=" << meta.keyword_count << "\n";
    return kOk;
}

int cmd_query(const QueryArgs& args) {
    const auto engine = semaq::parse_engine(args.engine);
    if (!engine) {
        throw CLI::ValidationError("--engine", "expected one of bl, se, an, ba");
    }
    const Prepared p = prepare(args);
    semaq::SearchOptions options;
    options.k = args.k;
    options.alpha = args.alpha;
    options.engine = *engine;
    options.generate.max_queries = args.max_queries;
    const semaq::SearchOutcome out = semaq::search(p.query, p.index, semaq::taxonomy_candidates(p.taxonomy), options);
    if (out.state == semaq::MatchState::hard) {
        report_hard(p.query, out.report);
        return kNoMatch;
    }
    if (out.truncated) {
        std::cerr << "warning: executed the " << out.candidates_used << " most similar of " << out.candidate_total
                  << " candidate queries\n";
    }
    for (const auto& [rank, r] : out.results) {
        std::vector<std::string> matches;
        for (const auto& m : r.matches) {
            matches.push_back(m.str());
        }
        if (args.json) {
            nlohmann::ordered_json j;
            j["rank"] = rank;
            j["sigma"] = r.score;
            j["lambda"] = r.query.sim;
            j["distance"] = r.distance;
            j["root"] = r.root.str();
            j["keywords"] = r.keywords;
            j["matches"] = matches;
            j["query_keywords"] = r.query.keywords;
            std::cout << j.dump() << "\n";
        } else {
            std::cout << rank << '\t' << fmt("%.6f", r.score) << '\t' << fmt("%.6f", r.query.sim) << '\t'
                      << r.distance << '\t' << r.root.str() << '\t' << join(matches, "\t") << '\t'
                      << join(r.query.keywords, "\t") << "\n";
        }
    }
    return kOk;
}

int cmd_plan(const QueryArgs& args) {
    const Prepared p = prepare(args);
    const auto report = semaq::diagnose(p.query, p.index, semaq::taxonomy_candidates(p.taxonomy));
    if (report.state() == semaq::MatchState::hard) {
        report_hard(p.query, report);
        return kNoMatch;
    }
    semaq::GenerateOptions gen;
    gen.max_queries = args.max_queries;
    const auto generated = semaq::generate(p.query, report, gen);
    const semaq::ExecutionPlan plan = semaq::plan_batches(generated.queries, p.index);
    for (std::size_t i = 0; i < plan.batches.size(); ++i) {
        std::cout << semaq::describe(plan.batches[i], i + 1) << "\n";
    }
    std::cout << "total_cost=" << plan.total_cost() << " batches=" << plan.batches.size()
              << " queries=" << plan.query_count() << "\n";
    return kOk;
}

int cmd_bench(const std::string& spec_path) {
    semaq::BenchSpec spec;
    try {
        spec = semaq::BenchSpec::load(spec_path);
    } catch (const semaq::BenchSpecError& e) {
        std::cerr << spec_path << ": " << e.what() << "\n";
        return kUsage;
    }
    semaq::write_bench_table(std::cout, spec, semaq::run_bench(spec));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantic keyword search over XML documents"};
    app.require_subcommand(1);

    std::string xml_path;
    std::string out_path;
    std::string index_taxonomy;
    std::vector<std::string> phrases;
    bool no_tags = false;
    auto* index = app.add_subcommand("index", "Build and persist an inverted index");
    index->add_option("xml", xml_path, "XML document")->required();
    index->add_option("-o,--output", out_path, "Index file to write")->required();
    index->add_option("-t,--taxonomy", index_taxonomy, "Register the taxonomy's multi-word terms as phrases");
    index->add_option("--phrase", phrases, "Register a multi-word phrase");
    index->add_flag("--no-tags", no_tags, "Do not index element names");

    QueryArgs query_args;
    auto* query = app.add_subcommand("query", "Run a keyword query");
    add_query_flags(query, query_args);
    query->add_option("--engine", query_args.engine, "bl, se, an or ba")->capture_default_str();
    query->add_flag("--json", query_args.json, "One JSON object per result");

    QueryArgs plan_args;
    auto* plan = app.add_subcommand("plan", "Print the batch execution plan for a query");
    add_query_flags(plan, plan_args);

    std::string spec_path;
    auto* bench = app.add_subcommand("bench", "Run the synthetic benchmark");
    bench->add_option("--spec", spec_path, "Bench spec file (key=value lines)")->required();

    try {
        app.parse(argc, argv);
        if (*index) {
            return cmd_index(xml_path, out_path, index_taxonomy, phrases, no_tags);
        }
        if (*query) {
            return cmd_query(query_args);
        }
        if (*plan) {
            return cmd_plan(plan_args);
        }
        return cmd_bench(spec_path);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const DataError& e) {
        std::cerr << e.what() << "\n";
        return kData;
    }
}
