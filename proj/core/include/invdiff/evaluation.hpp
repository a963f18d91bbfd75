#pragma once

#include <set>
#include <string>
#include <vector>

namespace invdiff {

enum class Level { kFile, kFunction, kBlock };

constexpr Level kAllLevels[] = {Level::kFile, Level::kFunction, Level::kBlock};

std::string to_string(Level level);

// Where a flag or warning landed, resolved at all three granularities.
// Empty fields mean the location could not be resolved at that level.
struct UnitRef {
    std::string file;
    std::string function;
    std::string block;

    const std::string& at(Level level) const;
};

// Buggy units and their benign counterparts for one bug. Invariant by
// construction: every buggy block lies in a buggy function, every buggy
// function in a buggy file.
struct GroundTruth {
    std::set<std::string> buggy_files, buggy_functions, buggy_blocks;
    std::set<std::string> benign_files, benign_functions, benign_blocks;

    const std::set<std::string>& buggy(Level level) const;
    const std::set<std::string>& benign(Level level) const;
};

struct HitResult {
    bool detected = false;     // at least one flag intersects a buggy unit
    bool false_alarm = false;  // flags exist and all land on benign units
    int unmapped = 0;          // flags outside the known unit universe
};

// A bug counts as detected at a level when any flag resolves to a buggy
// unit there; as a false alarm when flags exist but all mapped ones sit on
// benign units. Unresolvable flags are excluded from both outcomes and
// reported in `unmapped`.
HitResult hit_rate(const std::vector<UnitRef>& flags, const GroundTruth& truth,
                   Level level);

struct BugOutcome {
    std::string bug;
    std::string tool;
    Level level = Level::kFile;
    bool detected = false;
    bool false_alarm = false;
    int unmapped = 0;
};

struct SummaryRow {
    std::string tool;
    Level level = Level::kFile;
    double detected_pct = 0.0;
    double false_alarm_pct = 0.0;
    int n_bugs = 0;
};

// Per (tool, level): detection and false-alarm percentages over the bug set.
std::vector<SummaryRow> summarize(const std::vector<BugOutcome>& outcomes);

// CSV: tool,level,detected_pct,false_alarm_pct,n_bugs
std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace invdiff
