#pragma once

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "invdiff/trace.hpp"

namespace invdiff {

// A likely invariant in canonical text form. Canonical means byte-stable:
// operands of symmetric relations are ordered lexicographically and all
// constants use format_decimal, so the same semantic invariant always
// serializes identically.
struct Invariant {
    std::string canonical_text;

    auto operator<=>(const Invariant&) const = default;
};

enum class MineStatus { kOk, kTimeoutPartial, kEmptyTrace };

std::string to_string(MineStatus s);

// The invariants mined from one TraceSet. empty_trace status iff the
// source had zero rows; such sets contain no invariants.
struct InvariantSet {
    std::string breakpoint_id;
    std::string input_id;
    Version version = Version::kClean;
    std::set<std::string> invariants;
    MineStatus status = MineStatus::kOk;

    bool empty() const { return invariants.empty(); }
};

// Bounds of the pairwise linear template vi == a*vj + b.
constexpr int kLinearCoefMax = 4;
constexpr double kLinearInterceptMax = 65536.0;

// Template catalogue, evaluated over every row with no implied-invariant
// pruning (an instance that holds is always emitted, even when another
// instance subsumes it):
//   v == c                 constant column
//   v >= min, v <= max     observed bounds
//   v != 0                 no zero observed
//   vi == vj               equal columns (operands sorted)
//   vi <= vj               both directions checked independently
//   vi == a*vj + b         integer a in [-4,4]\{0}, |b| <= 65536, (a, b)
//                          derived exactly from the first two rows with
//                          distinct vj values, then verified on all rows
// Single-row sets emit constants and bounds only. Pairwise linear needs
// >= 2 rows and a non-constant vj. Comparisons are exact; callers feed
// canonical decimals.
//
// On timeout the invariants found so far are returned with
// status=timeout_partial. A zero-row input yields status=empty_trace.
InvariantSet mine_invariants(const TraceSet& t,
                             std::chrono::duration<double> timeout =
                                 std::chrono::duration<double>(300.0));

// Canonical renderings used by the miner (exposed for tests and tools).
std::string canonical_const(const std::string& v, double c);
std::string canonical_lower_bound(const std::string& v, double lo);
std::string canonical_upper_bound(const std::string& v, double hi);
std::string canonical_nonzero(const std::string& v);
std::string canonical_equal(const std::string& a, const std::string& b);
std::string canonical_le(const std::string& lhs, const std::string& rhs);
std::string canonical_linear(const std::string& vi, int a, const std::string& vj,
                             double b);

// Dump format: a `#set <bp> <version> <input>` header followed by one
// canonical invariant per line, lexicographically sorted.
std::string serialize_invariant_sets(const std::vector<InvariantSet>& sets);
std::vector<InvariantSet> parse_invariant_text(const std::string& text);
std::vector<InvariantSet> parse_invariant_file(const std::string& path);
void write_invariant_file(const std::string& path,
                          const std::vector<InvariantSet>& sets);

}  // namespace invdiff
