#include "doctest.h"

#include "invdiff/evaluation.hpp"

using namespace invdiff;

namespace {

// Two files, each with one function holding one block; file a.c is buggy
// down to block level, b.c is entirely benign.
GroundTruth fixture_truth() {
    GroundTruth t;
    t.buggy_files = {"a.c"};
    t.buggy_functions = {"fa"};
    t.buggy_blocks = {"a.c#b1"};
    t.benign_files = {"b.c"};
    t.benign_functions = {"fb", "fa2"};
    t.benign_blocks = {"a.c#b0", "a.c#b2", "b.c#b0"};
    return t;
}

const UnitRef kBuggyBlockFlag{"a.c", "fa", "a.c#b1"};
const UnitRef kBenignSameFunction{"a.c", "fa", "a.c#b2"};
const UnitRef kBenignOtherFile{"b.c", "fb", "b.c#b0"};
const UnitRef kUnmappedFlag{"", "", ""};

}  // namespace

TEST_CASE("detected / false-alarm truth table at every level") {
    const GroundTruth truth = fixture_truth();

    SUBCASE("buggy + benign flags detect without false alarm") {
        const std::vector<UnitRef> flags = {kBuggyBlockFlag, kBenignOtherFile};
        for (Level level : kAllLevels) {
            const HitResult r = hit_rate(flags, truth, level);
            CHECK(r.detected);
            CHECK(!r.false_alarm);
        }
    }

    SUBCASE("benign-only flags are a false alarm") {
        const std::vector<UnitRef> flags = {kBenignOtherFile};
        for (Level level : kAllLevels) {
            const HitResult r = hit_rate(flags, truth, level);
            CHECK(!r.detected);
            CHECK(r.false_alarm);
        }
    }

    SUBCASE("no flags: neither detected nor false alarm") {
        for (Level level : kAllLevels) {
            const HitResult r = hit_rate({}, truth, level);
            CHECK(!r.detected);
            CHECK(!r.false_alarm);
        }
    }

    SUBCASE("a flag in a benign block of the buggy function splits by level") {
        const std::vector<UnitRef> flags = {kBenignSameFunction};
        CHECK(hit_rate(flags, truth, Level::kFile).detected);
        CHECK(hit_rate(flags, truth, Level::kFunction).detected);
        const HitResult block = hit_rate(flags, truth, Level::kBlock);
        CHECK(!block.detected);
        CHECK(block.false_alarm);
    }

    SUBCASE("unmapped flags are excluded from both outcomes") {
        const std::vector<UnitRef> flags = {kUnmappedFlag};
        for (Level level : kAllLevels) {
            const HitResult r = hit_rate(flags, truth, level);
            CHECK(!r.detected);
            CHECK(!r.false_alarm);
            CHECK(r.unmapped == 1);
        }
        // Mixed unmapped + benign: the mapped flag still decides.
        const HitResult mixed =
            hit_rate({kUnmappedFlag, kBenignOtherFile}, truth, Level::kFile);
        CHECK(mixed.false_alarm);
        CHECK(mixed.unmapped == 1);
    }

    SUBCASE("detected and false_alarm are mutually exclusive") {
        const std::vector<std::vector<UnitRef>> flag_sets = {
            {},
            {kBuggyBlockFlag},
            {kBenignOtherFile},
            {kBuggyBlockFlag, kBenignOtherFile},
            {kBenignSameFunction, kBenignOtherFile},
            {kUnmappedFlag, kBuggyBlockFlag},
        };
        for (const auto& flags : flag_sets) {
            for (Level level : kAllLevels) {
                const HitResult r = hit_rate(flags, truth, level);
                CHECK(!(r.detected && r.false_alarm));
            }
        }
    }
}

TEST_CASE("containment monotonicity: block detection implies function and file") {
    const GroundTruth truth = fixture_truth();
    const std::vector<std::vector<UnitRef>> flag_sets = {
        {kBuggyBlockFlag},
        {kBenignSameFunction},
        {kBuggyBlockFlag, kBenignOtherFile},
        {kBenignOtherFile},
    };
    for (const auto& flags : flag_sets) {
        const bool block = hit_rate(flags, truth, Level::kBlock).detected;
        const bool function = hit_rate(flags, truth, Level::kFunction).detected;
        const bool file = hit_rate(flags, truth, Level::kFile).detected;
        if (block) CHECK(function);
        if (function) CHECK(file);
    }
}

TEST_CASE("summarize aggregates percentages per tool and level") {
    std::vector<BugOutcome> outcomes;
    // 18 bugs, 12 detected at block level for one tool.
    for (int i = 0; i < 18; ++i) {
        outcomes.push_back({"bug" + std::to_string(i), "invdiff", Level::kBlock,
                            i < 12, false});
    }
    // A tool that never fires: 0% detection, 0% false alarms.
    for (int i = 0; i < 18; ++i) {
        outcomes.push_back({"bug" + std::to_string(i), "silent", Level::kBlock,
                            false, false});
    }
    // A tool that flags benign code on every bug: 100% false alarms.
    for (int i = 0; i < 18; ++i) {
        outcomes.push_back({"bug" + std::to_string(i), "noisy", Level::kBlock,
                            false, true});
    }

    const auto rows = summarize(outcomes);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.n_bugs == 18);
        if (row.tool == "invdiff") {
            CHECK(row.detected_pct == doctest::Approx(100.0 * 12 / 18));
            CHECK(row.false_alarm_pct == 0.0);
        } else if (row.tool == "silent") {
            CHECK(row.detected_pct == 0.0);
            CHECK(row.false_alarm_pct == 0.0);
        } else {
            CHECK(row.false_alarm_pct == 100.0);
        }
    }

    const std::string csv = summary_csv(rows);
    CHECK(csv.rfind("tool,level,detected_pct,false_alarm_pct,n_bugs\n", 0) == 0);
    CHECK(csv.find("silent,block,0,0,18") != std::string::npos);
}
