#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_instance.hpp"
#include "semaq/slca.hpp"

using namespace semaq;
using semaq::testing::codes;
using semaq::testing::university_index;

namespace {

std::vector<DeweyCode> roots_of(const std::vector<ResultSubtree>& results) {
    std::vector<DeweyCode> out;
    for (const auto& r : results) {
        out.push_back(r.root);
    }
    std::sort(out.begin(), out.end());
    return out;
}

CandidateQuery direct_query(std::vector<std::string> keywords) { return CandidateQuery{std::move(keywords), {}, 1.0}; }

}  // namespace

TEST(SlcaBrute, WorkedQuery) {
    const std::vector<std::string> kws{"jack", "database"};
    EXPECT_EQ(oracle::slca_brute(kws, university_index()), codes({"0.0", "0.1", "0.2"}));
    std::vector<std::vector<DeweyCode>> lists{university_index().postings("jack").entries,
                                              university_index().postings("database").entries};
    EXPECT_EQ(oracle::all_lcas(lists), codes({"0", "0.0", "0.1", "0.2"}));
}

TEST(SlcaBrute, SingleListDropsAncestors) {
    const auto list = codes({"0.0", "0.0.1", "0.1", "0.2.0", "0.2.0.3"});
    EXPECT_EQ(oracle::slca_brute({list}), codes({"0.0.1", "0.1", "0.2.0.3"}));
    const ProbedList probed(list, nullptr);
    std::vector<DeweyCode> got;
    scan_eager_slca(std::span(&probed, 1), [&](const DeweyCode& r, std::span<const std::size_t>) {
        got.push_back(r);
    });
    EXPECT_EQ(got, codes({"0.0.1", "0.1", "0.2.0.3"}));
}

TEST(Closest, WorkedAndTrivialCases) {
    const auto& db = university_index().postings("database").entries;
    EXPECT_EQ(closest(DeweyCode::parse("0.1.1.0.0"), db).str(), "0.1.2.0.0");
    EXPECT_EQ(closest(DeweyCode::parse("0.2.3.0.0"), db).str(), "0.2.3.0.0");
    // Equal depth on both sides goes to the predecessor.
    EXPECT_EQ(closest(DeweyCode::parse("0.1"), codes({"0.0.5", "0.2.1"})).str(), "0.0.5");
}

TEST(Closest, MatchesFullScanDepth) {
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto inst = semaq::testing::random_instance(static_cast<std::uint64_t>(i % 50));
        const auto keywords = inst.index.keywords();
        const auto& list = inst.index.postings(keywords[rng() % keywords.size()]).entries;
        const auto& m = inst.tree.nodes()[rng() % inst.tree.size()].code;
        const DeweyCode c = closest(m, list);
        EXPECT_EQ(lca(m, c).level(), oracle::best_lca_depth(m, list));
    }
}

TEST(GetTight, WorkedCase) {
    const auto& db = university_index().postings("database").entries;
    for (std::size_t cursor = 0; cursor < db.size(); ++cursor) {
        const TightMatch t = get_tight(db, cursor, DeweyCode::parse("0.2"));
        EXPECT_EQ(t.code.str(), "0.2.3.0.0");
        EXPECT_EQ(t.distance, 3u);
    }
    const TightMatch self = get_tight(db, 0, DeweyCode::parse("0.2.4.0.1.0"));
    EXPECT_EQ(self.distance, 0u);
    EXPECT_THROW(get_tight(db, 0, DeweyCode::parse("0.1.1")), InvariantError);
}

TEST(GetTight, MatchesFullScan) {
    std::mt19937 rng(9);
    int checked = 0;
    while (checked < 500) {
        const auto inst = semaq::testing::random_instance(rng() % 100);
        const auto keywords = inst.index.keywords();
        const auto& list = inst.index.postings(keywords[rng() % keywords.size()]).entries;
        const auto& v = inst.tree.nodes()[rng() % inst.tree.size()].code;
        const auto want = oracle::tight_full_scan(list, v);
        if (!want) {
            continue;
        }
        const TightMatch got = get_tight(list, rng() % list.size(), v);
        EXPECT_EQ(got.code, *want);
        EXPECT_EQ(got.distance, want->level() - v.level());
        ++checked;
    }
}

TEST(Score, Arithmetic) {
    const Score s = score(0.91, 7, 4.0);
    EXPECT_NEAR(s.theta, 0.4, 1e-12);
    EXPECT_NEAR(s.sigma, 0.364, 1e-12);
    for (double alpha : {1.5, 2.0, 4.0, 100.0}) {
        EXPECT_DOUBLE_EQ(cohesiveness(0, alpha), 1.0);
    }
    EXPECT_NEAR(score(0.9167, 7, 2.0).sigma, 0.2291, 2e-3);
    EXPECT_NEAR(score(0.8462, 8, 2.0).sigma, 0.2029, 2e-3);
    EXPECT_THROW(cohesiveness(3, 1.0), std::invalid_argument);
    EXPECT_THROW(cohesiveness(3, 0.5), std::invalid_argument);
    EXPECT_THROW(cohesiveness(3, std::nan("")), std::invalid_argument);
}

TEST(Score, ThetaMonotonicity) {
    for (std::uint64_t d = 1; d < 30; ++d) {
        double prev = 0.0;
        for (double alpha : {1.1, 2.0, 3.0, 4.0, 8.0, 16.0, 64.0}) {
            const double theta = cohesiveness(d, alpha);
            EXPECT_GT(theta, prev);
            EXPECT_LT(theta, cohesiveness(d - 1, alpha));
            prev = theta;
        }
    }
    // Better in both similarity and distance wins for every alpha.
    for (double alpha : {1.01, 2.0, 4.0, 16.0, 1e6}) {
        EXPECT_GT(score(0.9, 3, alpha).sigma, score(0.8, 4, alpha).sigma);
    }
}

TEST(Engines, WorkedQueryResults) {
    const auto q = direct_query({"jack", "database"});
    for (auto* fn : {&process_query_bl, &process_query_se, &process_query_an}) {
        TopK topk(3);
        EngineCounters c;
        fn(q, university_index(), 4.0, topk, c);
        const auto results = topk.entries();
        ASSERT_EQ(results.size(), 3u);
        EXPECT_EQ(roots_of(results), codes({"0.0", "0.1", "0.2"}));
        for (const auto& r : results) {
            if (r.root.str() == "0.2") {
                EXPECT_EQ(r.matches, codes({"0.2.1.0.0", "0.2.3.0.0"}));
                EXPECT_EQ(r.distance, 6u);
                EXPECT_EQ(r.keywords, (std::vector<std::string>{"jack", "database"}));
            }
        }
    }
}

TEST(Engines, IntraPruningAgainstHighFloor) {
    TopK topk(1);
    ResultSubtree seed;
    seed.root = DeweyCode::parse("0.1");
    seed.score = 0.99;
    seed.query.sim = 0.99;
    ASSERT_TRUE(topk.insert(seed));
    for (auto* fn : {&process_query_se, &process_query_an}) {
        EngineCounters c;
        fn(CandidateQuery{{"jack", "database"}, {}, 0.5}, university_index(), 4.0, topk, c);
        EXPECT_EQ(c.results_pruned_intra, 3u);
        EXPECT_EQ(topk.entries().size(), 1u);
        EXPECT_DOUBLE_EQ(topk.entries()[0].score, 0.99);
    }
}

TEST(Engines, AgreeWithOracleOnRandomQueries) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = semaq::testing::random_instance(seed);
        const auto queries = oracle::all_candidate_queries(inst.query, inst.index, taxonomy_candidates(inst.taxonomy));
        for (const auto& q : queries) {
            auto want = oracle::query_results(q, inst.index, inst.alpha);
            std::sort(want.begin(), want.end(), result_precedes);
            for (auto* fn : {&process_query_bl, &process_query_se, &process_query_an}) {
                TopK topk(1000);
                EngineCounters c;
                fn(q, inst.index, inst.alpha, topk, c);
                ASSERT_EQ(topk.entries(), want) << "seed " << seed;
            }
        }
    }
}

TEST(Engines, BaselineProbesAtLeastScanEager) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = semaq::testing::random_instance(seed);
        const auto queries = oracle::all_candidate_queries(inst.query, inst.index, taxonomy_candidates(inst.taxonomy));
        TopK bl_top(inst.k);
        TopK se_top(inst.k);
        EngineCounters bl;
        EngineCounters se;
        for (const auto& q : queries) {
            process_query_bl(q, inst.index, inst.alpha, bl_top, bl);
            process_query_se(q, inst.index, inst.alpha, se_top, se);
        }
        EXPECT_GE(bl.list_probes, se.list_probes) << "seed " << seed;
        EXPECT_EQ(bl_top.entries(), se_top.entries());
    }
}

TEST(Engines, AnchorSkipsClusteredList) {
    // "spread" has one node under each of 0.0 .. 0.9; "clustered" only under 0.10.
    std::string xml = "<r>";
    for (int i = 0; i < 10; ++i) {
        xml += "<s>spread</s>";
    }
    xml += "<c>";
    for (int i = 0; i < 20; ++i) {
        xml += "<i>clustered</i>";
    }
    xml += "</c></r>";
    const auto index = InvertedIndex::build(parse_document(xml));
    const auto q = direct_query({"spread", "clustered"});
    TopK se_top(5);
    TopK an_top(5);
    EngineCounters se;
    EngineCounters an;
    process_query_se(q, index, 4.0, se_top, se);
    process_query_an(q, index, 4.0, an_top, an);
    EXPECT_EQ(se_top.entries(), an_top.entries());
    EXPECT_EQ(roots_of(an_top.entries()), codes({"0"}));
    EXPECT_LT(an.lca_ops, se.lca_ops);
}

TEST(TopK, OrderingDedupAndFloor) {
    TopK topk(2);
    EXPECT_FALSE(topk.sigma_min().has_value());
    EXPECT_FALSE(topk.prunes(0.0));
    auto make = [](const char* root, double score, double sim) {
        ResultSubtree r;
        r.root = DeweyCode::parse(root);
        r.score = score;
        r.query.sim = sim;
        return r;
    };
    EXPECT_TRUE(topk.insert(make("0.1", 0.5, 0.9)));
    EXPECT_FALSE(topk.insert(make("0.1", 0.5, 0.9)));  // identical result
    EXPECT_TRUE(topk.insert(make("0.2", 0.5, 0.9)));
    EXPECT_DOUBLE_EQ(*topk.sigma_min(), 0.5);
    EXPECT_TRUE(topk.prunes(0.49));
    EXPECT_FALSE(topk.prunes(0.5));
    // Same score, earlier root wins the tie.
    EXPECT_TRUE(topk.insert(make("0.0", 0.5, 0.9)));
    const auto e = topk.entries();
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0].root.str(), "0.0");
    EXPECT_EQ(e[1].root.str(), "0.1");
    EXPECT_FALSE(topk.insert(make("0.3", 0.4, 1.0)));

    TopK none(0);
    EXPECT_FALSE(none.insert(make("0", 1.0, 1.0)));
    EXPECT_FALSE(none.prunes(0.0));
}

TEST(TopK, RanksShareTies) {
    std::vector<ResultSubtree> rs(4);
    const double scores[] = {0.9, 0.7, 0.7, 0.5};
    for (int i = 0; i < 4; ++i) {
        rs[i].score = scores[i];
    }
    const auto ranked = rank_results(rs);
    EXPECT_EQ(ranked[0].rank, 1u);
    EXPECT_EQ(ranked[1].rank, 2u);
    EXPECT_EQ(ranked[2].rank, 2u);
    EXPECT_EQ(ranked[3].rank, 4u);
}
