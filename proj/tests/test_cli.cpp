#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace fs = std::filesystem;
using semaq::testing::data_path;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
};

/// Runs the CLI through the shell; stderr is folded into `out` when asked.
CliRun semaq_cli(const std::string& args, bool with_stderr = false) {
    std::string cmd = std::string(SEMAQ_CLI_PATH) + " " + args + (with_stderr ? " 2>&1" : " 2>/dev/null");
    CliRun run;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return run;
    }
    char buf[4096];
    while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
        run.out.append(buf, n);
    }
    const int raw = pclose(pipe);
    run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return run;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        fs::create_directories(work());
        ASSERT_EQ(semaq_cli("index " + data_path("university.xml") + " -o " + index_path() + " -t " + tax_path()).status,
                  0);
    }
    static fs::path work() { return SEMAQ_WORK_DIR; }
    static std::string index_path() { return (work() / "university.idx").string(); }
    static std::string tax_path() { return data_path("university.tax"); }
    static std::string query_flags() { return "-i " + index_path() + " -t " + tax_path(); }
};

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, '\t')) {
        out.push_back(f);
    }
    return out;
}

}  // namespace

TEST_F(Cli, IndexReportsMetadataAndRebuildsIdentically) {
    const auto a = (work() / "a.idx").string();
    const auto b = (work() / "b.idx").string();
    const CliRun first = semaq_cli("index " + data_path("university.xml") + " -o " + a);
    ASSERT_EQ(first.status, 0);
    EXPECT_NE(first.out.find("node_count="), std::string::npos);
    EXPECT_NE(first.out.find("max_depth="), std::string::npos);
    EXPECT_NE(first.out.find("keyword_count="), std::string::npos);
    ASSERT_EQ(semaq_cli("index " + data_path("university.xml") + " -o " + b).status, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    const auto loaded = semaq::InvertedIndex::load(a);
    EXPECT_EQ(loaded.list_size("database"), semaq::testing::university_index().list_size("database"));
}

TEST_F(Cli, IndexErrorsAreDataErrors) {
    const auto empty = work() / "empty.xml";
    std::ofstream(empty).close();
    const CliRun run = semaq_cli("index " + empty.string() + " -o " + (work() / "e.idx").string(), true);
    EXPECT_EQ(run.status, 2);
    EXPECT_FALSE(run.out.empty());
    EXPECT_EQ(semaq_cli("index " + (work() / "absent.xml").string() + " -o " + (work() / "x.idx").string()).status, 2);
}

TEST_F(Cli, QueryTopResult) {
    const CliRun run = semaq_cli("query " + query_flags() + " -k 1 --alpha 4 --engine se Jack lecturer class");
    ASSERT_EQ(run.status, 0);
    const auto rows = lines(run.out);
    ASSERT_EQ(rows.size(), 1u);
    const auto f = fields(rows[0]);
    ASSERT_EQ(f.size(), 11u);
    EXPECT_EQ(f[0], "1");
    EXPECT_NEAR(std::stod(f[1]), 0.364, 0.001);
    EXPECT_EQ(f[3], "7");
    EXPECT_EQ(f[4], "0.2");
    EXPECT_EQ((std::vector<std::string>(f.begin() + 8, f.end())),
              (std::vector<std::string>{"jack", "academic", "course"}));
}

TEST_F(Cli, EnginesPrintIdenticalRecords) {
    const std::string base = "query " + query_flags() + " -k 10 --alpha 4 ";
    const CliRun se = semaq_cli(base + "--engine se Jack lecturer class");
    ASSERT_EQ(se.status, 0);
    EXPECT_EQ(lines(se.out).size(), 6u);
    for (const char* engine : {"bl", "an", "ba"}) {
        EXPECT_EQ(semaq_cli(base + "--engine " + engine + " Jack lecturer class").out, se.out) << engine;
    }
}

TEST_F(Cli, JsonRecords) {
    const CliRun run = semaq_cli("query " + query_flags() + " -k 2 --json Jack lecturer class");
    ASSERT_EQ(run.status, 0);
    const auto rows = lines(run.out);
    ASSERT_EQ(rows.size(), 2u);
    const auto j = nlohmann::json::parse(rows[0]);
    EXPECT_EQ(j["rank"], 1);
    EXPECT_EQ(j["root"], "0.2");
    EXPECT_EQ(j["distance"], 7);
    EXPECT_EQ(j["matches"].size(), 3u);
    EXPECT_EQ(j["query_keywords"], (std::vector<std::string>{"jack", "academic", "course"}));
}

TEST_F(Cli, DirectMatchHasUnitSimilarity) {
    const CliRun run = semaq_cli("query " + query_flags() + " -k 3 Jack database");
    ASSERT_EQ(run.status, 0);
    const auto rows = lines(run.out);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& row : rows) {
        EXPECT_EQ(fields(row)[2], "1.000000");
    }
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(semaq_cli("query " + query_flags() + " --k 0 Jack lecturer").status, 1);
    EXPECT_EQ(semaq_cli("query " + query_flags() + " --alpha 1 Jack lecturer").status, 1);
    EXPECT_EQ(semaq_cli("query " + query_flags() + " --engine xo Jack lecturer").status, 1);
    EXPECT_EQ(semaq_cli("query " + query_flags()).status, 1);
    EXPECT_EQ(semaq_cli("frobnicate").status, 1);
    EXPECT_EQ(semaq_cli("").status, 1);
}

TEST_F(Cli, MissingIndexIsDataError) {
    EXPECT_EQ(semaq_cli("query -i " + (work() / "nope.idx").string() + " Jack").status, 2);
}

TEST_F(Cli, HardNoMatchNamesTheKeyword) {
    const CliRun run = semaq_cli("query " + query_flags() + " Jack zeppelin", true);
    EXPECT_EQ(run.status, 3);
    EXPECT_NE(run.out.find("zeppelin"), std::string::npos);
    EXPECT_EQ(run.out.find("'jack'"), std::string::npos);
}

TEST_F(Cli, UnregisteredPhraseWarns) {
    const auto plain = (work() / "plain.idx").string();
    ASSERT_EQ(semaq_cli("index " + data_path("university.xml") + " -o " + plain).status, 0);
    const CliRun run = semaq_cli("query -i " + plain + " \"full professor\"", true);
    EXPECT_NE(run.out.find("warning"), std::string::npos);
    const CliRun registered = semaq_cli("query " + query_flags() + " -k 1 \"full professor\"");
    EXPECT_EQ(registered.status, 0);
    EXPECT_EQ(lines(registered.out).size(), 1u);
}

TEST_F(Cli, PlanListsBatchesAndTotal) {
    const CliRun run = semaq_cli("plan " + query_flags() + " Jack lecturer class");
    ASSERT_EQ(run.status, 0);
    const auto rows = lines(run.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].rfind("batch 1 unit_cost=5.67 shared=jack,academic ", 0), 0u);
    EXPECT_EQ(rows[1].rfind("batch 2 unit_cost=5.67 shared=jack,full professor ", 0), 0u);
    EXPECT_EQ(rows[2], "total_cost=34 batches=2 queries=6");
}

TEST_F(Cli, PlanOfSingleQueryIsOneBatch) {
    const CliRun run = semaq_cli("plan " + query_flags() + " Jack database");
    ASSERT_EQ(run.status, 0);
    const auto rows = lines(run.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[1].find("batches=1 queries=1"), std::string::npos);
}

TEST_F(Cli, BenchIsDeterministic) {
    const std::string spec = data_path("bench_small.spec");
    const CliRun a = semaq_cli("bench --spec " + spec);
    const CliRun b = semaq_cli("bench --spec " + spec);
    ASSERT_EQ(a.status, 0);
    const auto ra = lines(a.out);
    const auto rb = lines(b.out);
    ASSERT_EQ(ra.size(), 2u + 3u * 4u);
    ASSERT_EQ(ra.size(), rb.size());
    EXPECT_EQ(ra[1], "axis_value\tengine\twall_ms\tlist_probes\tlca_ops\tresults_pruned_intra\tqueries_pruned_inter\t"
                     "batches_pruned");
    for (std::size_t i = 2; i < ra.size(); ++i) {
        auto fa = fields(ra[i]);
        auto fb = fields(rb[i]);
        ASSERT_EQ(fa.size(), 8u);
        fa.erase(fa.begin() + 2);
        fb.erase(fb.begin() + 2);
        EXPECT_EQ(fa, fb) << i;
    }
}

TEST_F(Cli, InvalidBenchSpecIsUsageError) {
    const auto bad = work() / "bad.spec";
    std::ofstream(bad) << "node_count=0\n";
    EXPECT_EQ(semaq_cli("bench --spec " + bad.string()).status, 1);
    std::ofstream(bad) << "colour=blue\n";
    EXPECT_EQ(semaq_cli("bench --spec " + bad.string()).status, 1);
}
