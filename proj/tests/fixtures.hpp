#pragma once

#include <string>
#include <vector>

#include "semaq/candidates.hpp"
#include "semaq/inverted_index.hpp"
#include "semaq/taxonomy.hpp"
#include "semaq/xml_tree.hpp"

namespace semaq::testing {

inline std::string data_path(const std::string& name) { return std::string(SEMAQ_TEST_DATA_DIR) + "/" + name; }

/// The university document used throughout the worked examples.
inline const XmlTree& university_tree() {
    static const XmlTree tree = parse_file(data_path("university.xml"));
    return tree;
}

inline const InvertedIndex& university_index() {
    static const InvertedIndex index = InvertedIndex::build(university_tree());
    return index;
}

inline const Taxonomy& university_taxonomy() {
    static const Taxonomy tax = Taxonomy::load(data_path("university.tax"));
    return tax;
}

/// Fixed similarities for the two missing keywords of the worked query.
inline CandidateProvider injected_provider() {
    return [](std::string_view kw) -> std::vector<CandidateKeyword> {
        if (kw == "lecturer") {
            return {{"academic", Relation::coordinate, 0.91}, {"full professor", Relation::coordinate, 0.84}};
        }
        if (kw == "class") {
            return {{"course", Relation::synonym, 1.0},
                    {"grade", Relation::synonym, 1.0},
                    {"event", Relation::hypernym, 0.35}};
        }
        return {};
    };
}

inline OriginalQuery worked_query() { return OriginalQuery::from({"Jack", "lecturer", "class"}); }

inline std::vector<DeweyCode> codes(std::initializer_list<const char*> dotted) {
    std::vector<DeweyCode> out;
    for (const char* d : dotted) {
        out.push_back(DeweyCode::parse(d));
    }
    return out;
}

}  // namespace semaq::testing
