#include <gtest/gtest.h>

#include <fstream>

#include "autoindex/error.h"
#include "autoindex/runner.h"
#include "support.h"

using namespace autoindex;
using namespace testing_support;

namespace {

std::filesystem::path motivating_path() { return source_dir() / "programs" / "motivating" / "motivating.dl"; }

}  // namespace

TEST(SelectReport, MotivatingProgram) {
    const RunReport r = select_report(load_program(motivating_path()));
    ASSERT_EQ(r.relations.size(), 2u);
    const RelationReport& a = r.relations[0];
    EXPECT_EQ(a.name, "A");
    EXPECT_EQ(a.searches, (std::vector<std::string>{"{x}", "{x,y}", "{x,z}", "{x,y,z}"}));
    EXPECT_EQ(a.chains, (std::vector<std::string>{"{x} ⊂ {x,y} ⊂ {x,y,z}", "{x,z}"}));
    EXPECT_EQ(a.indexes, (std::vector<std::string>{"x ≺ y ≺ z", "x ≺ z"}));
    EXPECT_EQ(a.naive_index_count, 4u);
    EXPECT_TRUE(r.relations[1].searches.empty());
}

TEST(SelectReport, FullScanOnlyAndEmptyPrograms) {
    const RunReport scan_only = select_report(parse_program(".decl A(x)\n.decl B(x)\nB(x) :- A(x).\n"));
    for (const RelationReport& r : scan_only.relations) {
        EXPECT_TRUE(r.searches.empty());
        EXPECT_TRUE(r.indexes.empty());
        EXPECT_EQ(r.naive_index_count, 0u);
    }
    EXPECT_TRUE(select_report(parse_program("")).relations.empty());
}

TEST(SelectReport, AutoNeverExceedsNaive) {
    for (const auto& path : corpus_programs()) {
        for (const RelationReport& r : select_report(load_program(path)).relations) {
            EXPECT_LE(r.indexes.size(), r.naive_index_count) << path << " " << r.name;
        }
    }
}

TEST(Report, JsonRoundTrip) {
    const std::filesystem::path out = scratch_dir("report_roundtrip");
    RunOptions options;
    options.output_dir = out;
    RunReport report = run_program(load_program(motivating_path()), motivating_path().parent_path(), options).report;
    report.phase_ms["odd"] = 0.1 + 0.2;
    EXPECT_EQ(report_from_json(nlohmann::json::parse(to_json(report).dump())), report);
    EXPECT_EQ(report_from_json(to_json(RunReport{})), RunReport{});
    EXPECT_THROW(report_from_json(nlohmann::json::object()), nlohmann::json::exception);
}

TEST(Report, TextNamesEverySection) {
    const std::string text = render_text(select_report(load_program(motivating_path())));
    EXPECT_NE(text.find("relation A"), std::string::npos);
    EXPECT_NE(text.find("indexes  (2, naive 4): x ≺ y ≺ z,  x ≺ z"), std::string::npos);
    EXPECT_NE(text.find("chains   (0): none"), std::string::npos);
}

TEST(Run, WritesOutputsAndCountsInserts) {
    const Program program = load_program(motivating_path());
    const std::filesystem::path out = scratch_dir("run_outputs");
    std::map<IndexMode, RunResult> results;
    for (IndexMode mode : {IndexMode::Auto, IndexMode::Naive, IndexMode::Scan}) {
        RunOptions options;
        options.mode = mode;
        options.output_dir = out / std::string(to_string(mode));
        results[mode] = run_program(program, motivating_path().parent_path(), options);
        EXPECT_TRUE(std::filesystem::exists(out / std::string(to_string(mode)) / "B.tsv"));
    }
    const ModeStats& a = results[IndexMode::Auto].report.modes.at("auto");
    const ModeStats& n = results[IndexMode::Naive].report.modes.at("naive");
    EXPECT_EQ(a.index_count, 2u);
    EXPECT_EQ(n.index_count, 4u);
    EXPECT_EQ(n.index_inserts, 2 * a.index_inserts);
    EXPECT_EQ(results[IndexMode::Scan].report.modes.at("scan").index_inserts, 0u);
    EXPECT_EQ(read_file(out / "auto" / "B.tsv"), read_file(out / "scan" / "B.tsv"));
    EXPECT_EQ(read_file(out / "naive" / "B.tsv"), read_file(out / "scan" / "B.tsv"));
    EXPECT_EQ(results[IndexMode::Auto].report.tuples_loaded, 40u);
}

TEST(Run, FactsDirectoryOverride) {
    const Program program = parse_program(".decl A(x)\n.decl B(x)\n.input A\n.output B\nB(x) :- A(x).\n");
    const std::filesystem::path dir = scratch_dir("facts_override");
    std::ofstream(dir / "A.tsv") << "one\ntwo\n";
    RunOptions options;
    options.facts_dir = dir;
    options.output_dir = dir / "out";
    const RunResult r = run_program(program, "/nonexistent", options);
    EXPECT_EQ(read_file(dir / "out" / "B.tsv"), "one\ntwo\n");
    options.facts_dir.reset();
    EXPECT_THROW(run_program(program, "/nonexistent", options), IoError);
}

TEST(Run, RepeatedRunsAreByteIdentical) {
    const Program program = load_program(source_dir() / "tests" / "corpus" / "18_multi_search_one_relation.dl");
    const std::filesystem::path dir = scratch_dir("determinism");
    write_random_facts(program, dir, 99, 2000);
    RunOptions options;
    options.facts_dir = dir;
    options.write_outputs = false;
    const RunResult first = run_program(program, dir, options);
    const RunResult second = run_program(program, dir, options);
    EXPECT_EQ(first.outputs, second.outputs);
    EXPECT_EQ(first.report.relations, second.report.relations);
}

TEST(Bench, ReportsEveryMode) {
    BenchOptions options;
    options.warmup = 0;
    options.repeats = 1;
    const RunReport r = bench_program(load_program(motivating_path()), motivating_path().parent_path(), options);
    ASSERT_EQ(r.modes.size(), 3u);
    EXPECT_EQ(r.modes.at("naive").index_inserts, 2 * r.modes.at("auto").index_inserts);
    EXPECT_EQ(r.relations[0].index_inserts.size(), 3u);
    EXPECT_NE(render_text(r).find("naive/auto index-insert ratio: 2.000"), std::string::npos);
}
