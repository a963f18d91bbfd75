#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/miner.hpp"
#include "invdiff/pipeline.hpp"

namespace fs = std::filesystem;
using namespace invdiff;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) {
        path = fs::temp_directory_path() / ("invdiff_pipe_" + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Corpus corpus_from(const std::vector<std::vector<int>>& inputs) {
    Corpus c;
    c.origin = CorpusOrigin::kImported;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        c.entries.push_back({"in" + std::to_string(i), encode_i16(inputs[i])});
    }
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("staged run on a crafted five-input corpus flags the seeded defect") {
    const auto& subject = subject_by_name("second_max");
    // Five orderings; in three of them the second maximum arrives while a
    // larger element already leads, which the defective update misses, and
    // two behave identically in both versions (accidental correctness).
    const Corpus corpus = corpus_from({{9, 2, 5},
                                       {8, 1, 7, 2},
                                       {4, 1, 2, 3},
                                       {5, 3, 9, 1},
                                       {7, 7, 6}});

    const auto left = trace_corpus(subject, kVersionClean, corpus, Version::kClean);
    const auto right = trace_corpus(subject, kVersionBuggy, corpus, Version::kBuggy);
    const auto lsets = mine_trace_sets(left, 1500, 1, 300.0);
    const auto rsets = mine_trace_sets(right, 1500, 1, 300.0);

    // Cross-check one observation against hand-mined invariants:
    // clean [9,2,5] at bp_loop has a single row (i=2, v=5, mx=9, sec=5).
    for (const auto& s : lsets) {
        if (s.breakpoint_id == "bp_loop" && s.input_id == "in0") {
            CHECK(s.invariants == std::set<std::string>{
                                      "i == 2", "i >= 2", "i <= 2",
                                      "mx == 9", "mx >= 9", "mx <= 9",
                                      "sec == 5", "sec >= 5", "sec <= 5",
                                      "v == 5", "v >= 5", "v <= 5"});
        }
    }
    // The buggy version leaves sec at min(9,2) for in0.
    for (const auto& s : rsets) {
        if (s.breakpoint_id == "bp_loop" && s.input_id == "in0") {
            CHECK(s.invariants.count("sec == 2"));
            CHECK(!s.invariants.count("sec == 5"));
        }
    }

    const auto distances = diff_invariant_sets(lsets, rsets);
    const auto reports = analyze_distances(distances, FlagConfig{});
    REQUIRE(reports.count("bp_loop"));
    CHECK(reports.at("bp_loop").flagged);
}

TEST_CASE("self-comparison produces all-zero distances and no flags") {
    const auto& subject = subject_by_name("bubble_sort");
    const Corpus corpus =
        corpus_from({{5, 3, 9, 1}, {2, 1}, {4, 4, 4}, {1, 2, 3}, {9, 8, 7, 6}, {0, -1}});

    const auto left = trace_corpus(subject, kVersionClean, corpus, Version::kClean);
    const auto right = trace_corpus(subject, kVersionClean, corpus, Version::kBuggy);
    const auto distances = diff_invariant_sets(mine_trace_sets(left, 1500, 1, 300.0),
                                               mine_trace_sets(right, 1500, 1, 300.0));
    for (const auto& d : distances) {
        CHECK(d.dice == 0.0);
        CHECK(d.jaccard == 0.0);
        CHECK(d.overlap == 0.0);
        CHECK(d.hamming_raw == 0);
    }
    for (const auto& [bp, report] : analyze_distances(distances, FlagConfig{})) {
        CHECK(!report.flagged);
    }
}

TEST_CASE("clean vs clean_alt on bubble sort does not flag") {
    const auto& subject = subject_by_name("bubble_sort");
    const Corpus corpus = corpus_from(
        {{5, 3, 9, 1}, {2, 1}, {4, 4, 4}, {1, 2, 3}, {9, 8, 7, 6}, {3, 1, 2, 5, 4}});

    const auto left = trace_corpus(subject, kVersionClean, corpus, Version::kClean);
    const auto right = trace_corpus(subject, kVersionCleanAlt, corpus, Version::kBuggy);
    const auto distances = diff_invariant_sets(mine_trace_sets(left, 1500, 1, 300.0),
                                               mine_trace_sets(right, 1500, 1, 300.0));
    for (const auto& [bp, report] : analyze_distances(distances, FlagConfig{})) {
        CHECK(!report.flagged);
    }
}

TEST_CASE("run_pipeline writes the full artifact tree") {
    TempDir dir("tree");
    PipelineConfig config;
    config.subject = "second_max";
    config.fuzz_budget = 300;
    config.seed = 42;
    config.out_dir = (dir.path / "run").string();

    const PipelineResult result = run_pipeline(config);

    for (const char* artifact :
         {"run_meta.json", "subjects.json", "corpus/corpus.meta.json",
          "traces_clean.txt", "traces_buggy.txt", "invariants_clean.txt",
          "invariants_buggy.txt", "distances.csv", "flags.json", "groups.json",
          "evaluation_summary.csv", "evaluation.json",
          "sources/second_max.c"}) {
        CHECK(fs::exists(dir.path / "run" / artifact));
    }
    for (const auto& [bp, report] : result.reports) {
        CHECK(fs::exists(dir.path / "run" / "reports" / (bp + ".json")));
        if (report.status == ReportStatus::kOk) {
            CHECK(fs::exists(dir.path / "run" / "density" / (bp + "_dice.csv")));
        }
    }

    SUBCASE("analyze stage replays byte-identically from the distances CSV") {
        const auto distances =
            parse_distances_csv((dir.path / "run" / "distances.csv").string());
        const auto manifests =
            load_manifest((dir.path / "run" / "subjects.json").string());
        std::vector<std::string> declared;
        for (const auto& bp : manifests.front().breakpoints) {
            declared.push_back(bp.id);
        }
        const auto reports = analyze_distances(distances, config.flag_config(), declared);
        fs::create_directories(dir.path / "replay");
        write_analysis((dir.path / "replay").string(), reports);
        for (const auto& [bp, report] : reports) {
            (void)report;
            CHECK(slurp(dir.path / "replay" / "reports" / (bp + ".json")) ==
                  slurp(dir.path / "run" / "reports" / (bp + ".json")));
        }
        CHECK(slurp(dir.path / "replay" / "flags.json") ==
              slurp(dir.path / "run" / "flags.json"));
    }
}

TEST_CASE("external trace files drive the pipeline without a subject") {
    TempDir dir("external");
    const std::string clean_traces =
        "#bp bp1 clean in0\n#vars x\n1\n2\n"
        "#bp bp1 clean in1\n#vars x\n1\n3\n"
        "#bp bp1 clean in2\n#vars x\n2\n4\n"
        "#bp bp1 clean in3\n#vars x\n1\n5\n"
        "#bp bp1 clean in4\n#vars x\n2\n6\n";
    const std::string buggy_traces =
        "#bp bp1 buggy in0\n#vars x\n1\n7\n"
        "#bp bp1 buggy in1\n#vars x\n1\n8\n"
        "#bp bp1 buggy in2\n#vars x\n2\n9\n"
        "#bp bp1 buggy in3\n#vars x\n1\n10\n"
        "#bp bp1 buggy in4\n#vars x\n2\n11\n";
    std::ofstream(dir.path / "clean.txt") << clean_traces;
    std::ofstream(dir.path / "buggy.txt") << buggy_traces;

    PipelineConfig config;
    config.traces_left = (dir.path / "clean.txt").string();
    config.traces_right = (dir.path / "buggy.txt").string();
    config.out_dir = (dir.path / "run").string();

    const PipelineResult result = run_pipeline(config);
    REQUIRE(result.reports.count("bp1"));
    CHECK(result.reports.at("bp1").n_inputs == 5);
    CHECK(fs::exists(dir.path / "run" / "distances.csv"));
}

TEST_CASE("config validation catches contradictions") {
    PipelineConfig config;
    config.out_dir = "somewhere";
    CHECK_THROWS_AS(run_pipeline(config), ConfigError);  // no subject, no traces

    PipelineConfig both;
    both.subject = "gcd";
    both.traces_left = "x";
    both.traces_right = "y";
    both.out_dir = "somewhere";
    CHECK_THROWS_AS(run_pipeline(both), ConfigError);

    PipelineConfig bad_threshold;
    bad_threshold.subject = "gcd";
    bad_threshold.flag_threshold = 5;
    bad_threshold.out_dir = "somewhere";
    CHECK_THROWS_AS(run_pipeline(bad_threshold), ConfigError);
}
