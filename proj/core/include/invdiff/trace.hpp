#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace invdiff {

// Role a trace plays in a two-version comparison. When a subject's
// alternative clean build is traced, it occupies the "buggy" (right-hand)
// slot of the comparison; the labels name sides, not verdicts.
enum class Version { kClean, kBuggy };

std::string to_string(Version v);
Version version_from_string(const std::string& s);

// One watched variable at one execution round. Values are always finite
// decimals; string-typed source values are hashed first (hash_string_value).
struct VariableSnapshot {
    std::string name;
    double value = 0.0;

    bool operator==(const VariableSnapshot&) const = default;
};

// All watched variables captured during a single pass over a breakpoint.
// At most ten snapshots; names are unique within the row and identical
// across rows of the same TraceSet.
struct TraceRow {
    int round_index = 0;
    std::vector<VariableSnapshot> snapshots;

    bool operator==(const TraceRow&) const = default;
};

// Everything one input produced at one breakpoint in one program version.
// Zero rows means the input never reached the breakpoint; the set still
// exists so one-sided comparisons stay explicit downstream.
struct TraceSet {
    std::string input_id;
    Version version = Version::kClean;
    std::string breakpoint_id;
    std::vector<TraceRow> rows;

    std::vector<std::string> variable_names() const;
    bool operator==(const TraceSet&) const = default;
};

constexpr std::size_t kMaxWatchedVariables = 10;

// Deterministic string-to-decimal hash: the 64-bit FNV-1a value of the
// bytes, taken as an unsigned integer decimal. Same input, same output,
// on every platform.
double hash_string_value(std::string_view bytes);

// Checks all TraceSet invariants: round indices run 0..n-1, per-row names
// are unique, match across rows, and number at most kMaxWatchedVariables,
// and every value is finite. Throws ValidationError.
void validate_trace_set(const TraceSet& t);

// Line-based trace file format:
//   #bp <breakpoint_id> <version> <input_id>
//   #vars v1,v2,...
//   <decimal>,<decimal>,...        (one line per round, header order)
// Multiple record blocks per file; blank lines are ignored.
std::vector<TraceSet> parse_trace_file(const std::string& path);
std::vector<TraceSet> parse_trace_text(const std::string& text);
std::string serialize_trace_sets(const std::vector<TraceSet>& sets);
void write_trace_file(const std::string& path, const std::vector<TraceSet>& sets);

// Keeps at most `cap` rows, chosen uniformly without replacement with the
// given seed, preserving original row order (round indices are renumbered
// 0..k-1 so the result is again a valid TraceSet). Sets at or under the
// cap are returned unchanged.
TraceSet sample_traces(const TraceSet& t, std::size_t cap, std::uint64_t seed);

}  // namespace invdiff
