#include "doctest.h"

#include <algorithm>

#include "invdiff/blocks.hpp"
#include "invdiff/manifest.hpp"
#include "invdiff/numeric.hpp"
#include "invdiff/subjects.hpp"

using namespace invdiff;

namespace {

std::vector<std::uint8_t> random_input(Rng& rng) {
    // Mix raw byte strings with small-integer arrays so every subject's
    // input schema (including factorial's 0..20 range) is exercised.
    if (rng.below(3) == 0) {
        const std::size_t len = rng.below(24);
        std::vector<std::uint8_t> bytes;
        for (std::size_t i = 0; i < len; ++i) {
            bytes.push_back(static_cast<std::uint8_t>(rng.below(256)));
        }
        return bytes;
    }
    std::vector<int> values;
    const std::size_t len = rng.below(8);
    for (std::size_t i = 0; i < len; ++i) {
        values.push_back(static_cast<int>(rng.below(41)) - 12);
    }
    return encode_i16(values);
}

const TraceSet& trace_of(const SubjectRun& run, const std::string& bp) {
    for (const auto& t : run.traces) {
        if (t.breakpoint_id == bp) return t;
    }
    REQUIRE(false);
    static TraceSet dummy;
    return dummy;
}

double final_value(const TraceSet& t, const std::string& var) {
    REQUIRE(!t.rows.empty());
    for (const auto& snap : t.rows.back().snapshots) {
        if (snap.name == var) return snap.value;
    }
    REQUIRE(false);
    return 0.0;
}

}  // namespace

TEST_CASE("the seven built-in subjects are declared consistently") {
    const auto& subjects = list_subjects();
    REQUIRE(subjects.size() == 7);

    std::vector<std::string> titles;
    for (const auto& s : subjects) titles.push_back(s.title);
    CHECK(std::count(titles.begin(), titles.end(), "second maximum search") == 1);
    CHECK(std::count(titles.begin(), titles.end(), "greatest common divisor") == 1);

    for (const auto& s : subjects) {
        CHECK(!s.breakpoints.empty());
        CHECK(s.versions.count(kVersionClean));
        CHECK(s.versions.count(kVersionCleanAlt));
        CHECK(s.versions.count(kVersionBuggy));
        CHECK(!s.seed_inputs.empty());
        for (const auto& bp : s.breakpoints) {
            CHECK(bp.watched.size() <= kMaxWatchedVariables);
        }
        // Edges and ground truth reference declared breakpoints.
        for (const auto& [a, b] : s.dependency_edges) {
            CHECK(s.breakpoint(a) != nullptr);
            CHECK(s.breakpoint(b) != nullptr);
        }
        for (const auto& bp : s.ground_truth.buggy_breakpoints) {
            CHECK(s.breakpoint(bp) != nullptr);
        }
    }
}

TEST_CASE("second_max clean run matches the hand-executed algorithm") {
    // Hand oracle for [5,3,9,1]: mx=5,sec=3; v=9 -> sec=5,mx=9; v=1 -> no
    // change. Final sec == 5.
    const auto& subject = subject_by_name("second_max");
    const auto input = encode_i16({5, 3, 9, 1});
    const SubjectRun run =
        run_subject(subject, kVersionClean, input, Version::kClean, "t0");
    REQUIRE(run.outcome == Outcome::kOk);
    CHECK(run.output == "5");
    CHECK(final_value(trace_of(run, "bp_loop"), "sec") == 5.0);
    CHECK(final_value(trace_of(run, "bp_done"), "sec") == 5.0);
    CHECK(final_value(trace_of(run, "bp_done"), "mx") == 9.0);

    SUBCASE("the buggy version misses the second maximum on some ordering") {
        // [9,2,5]: 5 should become the new second maximum via the non-max
        // path, which the defective ternary never takes.
        const auto perm = encode_i16({9, 2, 5});
        const SubjectRun clean =
            run_subject(subject, kVersionClean, perm, Version::kClean, "t1");
        const SubjectRun buggy =
            run_subject(subject, kVersionBuggy, perm, Version::kBuggy, "t1");
        CHECK(clean.output == "5");
        CHECK(buggy.output == "2");
    }
}

TEST_CASE("factorial base case produces a single-round completion trace") {
    const auto& subject = subject_by_name("factorial");
    const SubjectRun run =
        run_subject(subject, kVersionClean, encode_i16({0}), Version::kClean, "t0");
    REQUIRE(run.outcome == Outcome::kOk);
    CHECK(run.output == "1");
    CHECK(trace_of(run, "bp_loop").rows.empty());
    CHECK(trace_of(run, "bp_done").rows.size() == 1);
}

TEST_CASE("undecodable inputs crash instead of tracing") {
    const auto& subject = subject_by_name("second_max");
    const SubjectRun run =
        run_subject(subject, kVersionClean, {0x01}, Version::kClean, "t0");
    CHECK(run.outcome == Outcome::kCrash);
    CHECK(run.traces.size() == subject.breakpoints.size());
    for (const auto& t : run.traces) CHECK(t.rows.empty());
}

TEST_CASE("run_subject is deterministic") {
    Rng rng(2025);
    for (const auto& subject : list_subjects()) {
        for (int iter = 0; iter < 20; ++iter) {
            const auto input = random_input(rng);
            const SubjectRun a =
                run_subject(subject, kVersionBuggy, input, Version::kBuggy, "x");
            const SubjectRun b =
                run_subject(subject, kVersionBuggy, input, Version::kBuggy, "x");
            CHECK(a.outcome == b.outcome);
            CHECK(a.output == b.output);
            REQUIRE(a.traces.size() == b.traces.size());
            for (std::size_t i = 0; i < a.traces.size(); ++i) {
                CHECK(a.traces[i] == b.traces[i]);
            }
        }
    }
}

TEST_CASE("clean and clean_alt agree on outputs for all subjects") {
    Rng rng(77);
    for (const auto& subject : list_subjects()) {
        int compared = 0;
        for (int iter = 0; iter < 300; ++iter) {
            const auto input = random_input(rng);
            const SubjectRun a =
                run_subject(subject, kVersionClean, input, Version::kClean, "x");
            const SubjectRun b =
                run_subject(subject, kVersionCleanAlt, input, Version::kClean, "x");
            CHECK(a.outcome == b.outcome);
            if (a.outcome == Outcome::kOk) {
                CHECK(a.output == b.output);
                ++compared;
            }
        }
        CHECK(compared > 0);
    }
}

TEST_CASE("clean and clean_alt traces are identical except for gcd and permutation") {
    Rng rng(91);
    for (const auto& subject : list_subjects()) {
        const bool expect_identical =
            subject.name != "gcd" && subject.name != "permutation";
        bool saw_difference = false;
        for (int iter = 0; iter < 300; ++iter) {
            const auto input = random_input(rng);
            const SubjectRun a =
                run_subject(subject, kVersionClean, input, Version::kClean, "x");
            const SubjectRun b =
                run_subject(subject, kVersionCleanAlt, input, Version::kClean, "x");
            if (a.outcome != Outcome::kOk) continue;
            REQUIRE(a.traces.size() == b.traces.size());
            for (std::size_t i = 0; i < a.traces.size(); ++i) {
                if (expect_identical) {
                    CHECK(a.traces[i] == b.traces[i]);
                } else if (!(a.traces[i] == b.traces[i])) {
                    saw_difference = true;
                }
            }
        }
        if (!expect_identical) {
            // The alternative implementations reorder execution, which must
            // show up in the traces for at least some inputs.
            CHECK(saw_difference);
        }
    }
}

TEST_CASE("declared breakpoint lines match the placement rules on the sources") {
    for (const auto& subject : list_subjects()) {
        const BlockTree tree = parse_blocks(subject.source_text, subject.source_name);
        std::vector<LineAnnotation> changes;
        for (int line : subject.ground_truth.changed_lines) {
            changes.push_back({line, subject.ground_truth.change_kind, ""});
        }
        const Placement placement = place_breakpoint(tree, changes);
        REQUIRE(subject.ground_truth.buggy_breakpoints.size() == 1);
        const std::string buggy_bp = *subject.ground_truth.buggy_breakpoints.begin();
        const BreakpointDecl* decl = subject.breakpoint(buggy_bp);
        REQUIRE(decl != nullptr);
        CHECK(decl->line == placement.line);

        // The rules land on the three different cases across the corpus.
        if (subject.name == "second_max") CHECK(placement.rule == 1);
        if (subject.name == "array_concat") CHECK(placement.rule == 2);
        if (subject.name == "gcd") CHECK(placement.rule == 3);
    }
}

TEST_CASE("manifest resolves breakpoints and ground truth to source units") {
    const auto& subject = subject_by_name("second_max");
    const SubjectManifest m = build_manifest(subject);

    CHECK(m.truth.buggy_files == std::set<std::string>{"second_max.c"});
    CHECK(m.truth.buggy_functions == std::set<std::string>{"find_second_max"});
    REQUIRE(m.truth.buggy_blocks.size() == 1);

    // The buggy breakpoint observes the buggy block; bp_done sits in the
    // function body, which is benign at block level.
    const UnitRef& loop = m.breakpoint_units.at("bp_loop");
    CHECK(m.truth.buggy_blocks.count(loop.block) == 1);
    const UnitRef& done = m.breakpoint_units.at("bp_done");
    CHECK(m.truth.benign_blocks.count(done.block) == 1);
    CHECK(done.function == "find_second_max");

    SUBCASE("gcd separates the wrapper function as benign") {
        const SubjectManifest g = build_manifest(subject_by_name("gcd"));
        CHECK(g.truth.buggy_functions == std::set<std::string>{"gcd"});
        CHECK(g.truth.benign_functions == std::set<std::string>{"run_gcd"});
    }

    SUBCASE("manifest JSON round trip") {
        const std::string text = manifest_json({m});
        const auto parsed = parse_manifest_json(text);
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0].name == m.name);
        CHECK(parsed[0].buggy_breakpoints == m.buggy_breakpoints);
        CHECK(parsed[0].truth.buggy_blocks == m.truth.buggy_blocks);
        CHECK(parsed[0].breakpoint_units.at("bp_loop").block == loop.block);
        CHECK(parsed[0].dependency_edges == m.dependency_edges);
    }
}
