#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invdiff/miner.hpp"

namespace invdiff {

// The four set distances between the clean- and buggy-version invariant
// sets of one input at one breakpoint. All normalized values live in [0,1].
//
//   dice         1 - 2|U n V| / (|U| + |V|)
//   jaccard      1 - |U n V| / |U u V|
//   overlap      1 - |U n V| / min(|U|, |V|)
//   hamming_raw  differing positions of the membership vectors over the
//                sorted union universe, i.e. |U symdiff V|
//   hamming_norm hamming_raw / |U u V|
//
// Invariants on only one side score the maximum distance (one_sided=true,
// all normalized values 1). Two empty sets agree: all distances 0 and
// no_invariants=true.
struct DistanceVector {
    std::string breakpoint_id;
    std::string input_id;
    double dice = 0.0;
    double jaccard = 0.0;
    double overlap = 0.0;
    std::uint64_t hamming_raw = 0;
    double hamming_norm = 0.0;
    bool one_sided = false;
    bool no_invariants = false;

    bool operator==(const DistanceVector&) const = default;
};

// U and V must agree on breakpoint and input ids (UsageError otherwise);
// they represent the two versions of the same observation.
DistanceVector distance_vector(const InvariantSet& u, const InvariantSet& v);

// CSV: breakpoint_id,input_id,dice,jaccard,overlap,hamming_raw,hamming_norm,one_sided
// Pairs with no invariants on either side carry no behavioral signal and
// are not written.
std::string distances_csv(const std::vector<DistanceVector>& vectors);
std::vector<DistanceVector> parse_distances_csv_text(const std::string& text);
std::vector<DistanceVector> parse_distances_csv(const std::string& path);
void write_distances_csv(const std::string& path,
                         const std::vector<DistanceVector>& vectors);

}  // namespace invdiff
