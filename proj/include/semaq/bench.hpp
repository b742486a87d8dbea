#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semaq/candidates.hpp"
#include "semaq/framework.hpp"
#include "semaq/inverted_index.hpp"
#include "semaq/taxonomy.hpp"

namespace semaq {

class BenchSpecError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class BenchAxis { query_length, k, alpha, candidate_count };

std::string_view to_string(BenchAxis axis);

/// Synthetic workload parameters plus the swept axis.
struct BenchSpec {
    std::size_t node_count = 2000;
    std::size_t fanout = 6;
    std::size_t depth = 8;
    std::size_t keyword_vocabulary_size = 400;
    double zipf_exponent = 1.0;
    std::size_t query_length = 4;
    std::size_t candidate_count = 40;
    std::size_t repetitions = 1;
    std::uint64_t seed = 1;

    std::size_t k = 10;
    double alpha = 4.0;
    BenchAxis axis = BenchAxis::candidate_count;
    std::vector<double> values{40, 80, 120, 160, 200};
    std::vector<Engine> engines{Engine::bl, Engine::se, Engine::an, Engine::ba};

    /// Throws BenchSpecError naming the first offending field.
    void validate() const;
    /// `key=value` lines; blank lines and lines starting with '#' are skipped.
    static BenchSpec parse(std::string_view text);
    static BenchSpec load(const std::string& path);
};

/// A seeded document, its index, and a taxonomy giving the missing query
/// keyword `candidate_count` in-index replacements. The other query keywords
/// are the most frequent vocabulary words.
struct BenchWorkload {
    std::string xml;
    InvertedIndex index;
    Taxonomy taxonomy;
    OriginalQuery query;
};

std::string bench_document(const BenchSpec& spec);
BenchWorkload make_workload(const BenchSpec& spec);

struct BenchRow {
    double axis_value = 0;
    Engine engine = Engine::se;
    double wall_ms = 0;  // mean over repetitions
    EngineCounters counters;
    std::size_t candidates = 0;
};

/// Runs every engine at every axis value, sequentially.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// Header plus one tab-separated row per measurement:
/// `axis_value engine wall_ms list_probes lca_ops results_pruned_intra queries_pruned_inter batches_pruned`.
void write_bench_table(std::ostream& out, const BenchSpec& spec, const std::vector<BenchRow>& rows);

}  // namespace semaq
