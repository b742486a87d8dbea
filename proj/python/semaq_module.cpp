#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semaq/batch.hpp"
#include "semaq/framework.hpp"
#include "semaq/inverted_index.hpp"
#include "semaq/taxonomy.hpp"
#include "semaq/xml_tree.hpp"

namespace py = pybind11;
using namespace semaq;

namespace {

std::vector<std::string> code_strings(const std::vector<DeweyCode>& codes) {
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (const auto& c : codes) {
        out.push_back(c.str());
    }
    return out;
}

CandidateProvider provider_for(const Taxonomy* taxonomy) {
    if (taxonomy == nullptr) {
        return [](std::string_view) { return std::vector<CandidateKeyword>{}; };
    }
    return taxonomy_candidates(*taxonomy);
}

Engine engine_named(const std::string& name) {
    const auto e = parse_engine(name);
    if (!e) {
        throw py::value_error("unknown engine '" + name + "'");
    }
    return *e;
}

py::dict run_search(const std::vector<std::string>& keywords, const InvertedIndex& index, const Taxonomy* taxonomy,
                    std::size_t k, double alpha, const std::string& engine, std::size_t max_queries) {
    if (k == 0) {
        throw py::value_error("k must be positive");
    }
    SearchOptions options;
    options.k = k;
    options.alpha = alpha;
    options.engine = engine_named(engine);
    options.generate.max_queries = max_queries;
    const OriginalQuery query = OriginalQuery::from(keywords);

    SearchOutcome out;
    {
        py::gil_scoped_release release;
        out = search(query, index, provider_for(taxonomy), options);
    }

    py::list results;
    for (const auto& [rank, r] : out.results) {
        py::dict row;
        row["rank"] = rank;
        row["sigma"] = r.score;
        row["lambda"] = r.query.sim;
        row["distance"] = r.distance;
        row["root"] = r.root.str();
        row["keywords"] = r.keywords;
        row["matches"] = code_strings(r.matches);
        row["query_keywords"] = r.query.keywords;
        results.append(row);
    }
    std::vector<std::string> irreplaceable;
    for (std::size_t pos : out.report.irreplaceable()) {
        irreplaceable.push_back(query.keywords[pos]);
    }
    py::dict counters;
    counters["list_probes"] = out.counters.list_probes;
    counters["lca_ops"] = out.counters.lca_ops;
    counters["results_pruned_intra"] = out.counters.results_pruned_intra;
    counters["queries_executed"] = out.counters.queries_executed;
    counters["queries_pruned_inter"] = out.counters.queries_pruned_inter;
    counters["batches_pruned"] = out.counters.batches_pruned;

    py::dict d;
    d["state"] = std::string(to_string(out.state));
    d["irreplaceable"] = irreplaceable;
    d["candidate_total"] = out.candidate_total;
    d["truncated"] = out.truncated;
    d["results"] = results;
    d["counters"] = counters;
    return d;
}

}  // namespace

PYBIND11_MODULE(semaq, m) {
    m.doc() = "Semantic keyword search over XML documents";

    py::register_exception<XmlParseError>(m, "XmlParseError", PyExc_ValueError);
    py::register_exception<IndexError>(m, "IndexFormatError", PyExc_ValueError);
    py::register_exception<TaxonomyError>(m, "TaxonomyError", PyExc_ValueError);
    py::register_exception<EmptyDocumentError>(m, "EmptyDocumentError", PyExc_ValueError);

    py::class_<InvertedIndex>(m, "Index")
        .def_static(
            "from_xml",
            [](const std::string& xml, const std::vector<std::string>& phrases, bool include_tags) {
                TokenizeOptions options;
                options.include_tag_names = include_tags;
                return InvertedIndex::build(parse_document(xml), phrases, options);
            },
            py::arg("xml"), py::arg("phrases") = std::vector<std::string>{}, py::arg("include_tags") = true)
        .def_static("load", &InvertedIndex::load, py::arg("path"))
        .def("save", &InvertedIndex::save, py::arg("path"))
        .def("has_keyword", &InvertedIndex::has_keyword)
        .def("postings", [](const InvertedIndex& idx, const std::string& kw) {
            return code_strings(idx.postings(kw).entries);
        })
        .def("keywords", &InvertedIndex::keywords)
        .def_property_readonly("node_count", [](const InvertedIndex& idx) { return idx.meta().node_count; })
        .def_property_readonly("max_depth", [](const InvertedIndex& idx) { return idx.meta().max_depth; });

    py::class_<Taxonomy>(m, "Taxonomy")
        .def_static("load", &Taxonomy::load, py::arg("path"))
        .def_static("parse", &Taxonomy::parse, py::arg("text"))
        .def("contains", &Taxonomy::contains)
        .def("sim_wp", &Taxonomy::sim_wp)
        .def("dsim", &Taxonomy::dsim, py::arg("original"), py::arg("candidate"))
        .def("candidates", [](const Taxonomy& t, const std::string& term) {
            std::vector<std::tuple<std::string, std::string, double>> out;
            for (const auto& c : t.candidates(term)) {
                out.emplace_back(c.term, std::string(to_string(c.relation)), c.dsim);
            }
            return out;
        });

    m.def("cohesiveness", &cohesiveness, py::arg("distance"), py::arg("alpha"));

    m.def("search", &run_search, py::arg("keywords"), py::arg("index"), py::arg("taxonomy") = nullptr,
          py::arg("k") = 10, py::arg("alpha") = 4.0, py::arg("engine") = "se", py::arg("max_queries") = 50000,
          "Top-k semantically related results as a dict with state, results and counters.");

    m.def(
        "plan",
        [](const std::vector<std::string>& keywords, const InvertedIndex& index, const Taxonomy* taxonomy) {
            const OriginalQuery query = OriginalQuery::from(keywords);
            const auto report = diagnose(query, index, provider_for(taxonomy));
            const ExecutionPlan plan = plan_batches(generate(query, report).queries, index);
            std::vector<std::string> lines;
            for (std::size_t i = 0; i < plan.batches.size(); ++i) {
                lines.push_back(describe(plan.batches[i], i + 1));
            }
            return py::make_tuple(lines, plan.total_cost());
        },
        py::arg("keywords"), py::arg("index"), py::arg("taxonomy") = nullptr,
        "Batch plan lines and the plan's total cost.");
}
