#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace invdiff {

// A connected component of the breakpoint dependency graph. Downstream
// breakpoints flagged only because faulty data propagated into them land
// in the same group as their source, so they are not counted as separate
// false alarms.
struct BreakpointGroup {
    std::string group_id;
    std::set<std::string> members;
    bool flagged = false;
    bool contains_buggy = false;
};

// Connected components of the undirected dependency graph; isolated
// breakpoints form singleton groups. Groups are ordered and named by their
// smallest member. An edge endpoint that is not a known breakpoint raises
// ValidationError.
std::vector<BreakpointGroup> group_breakpoints(
    const std::vector<std::string>& breakpoints,
    const std::vector<std::pair<std::string, std::string>>& edges);

struct GroupVerdicts {
    std::vector<BreakpointGroup> groups;
    int flagged_groups = 0;
    int detected_groups = 0;         // flagged and containing a buggy breakpoint
    int grouped_false_alarms = 0;    // flagged groups with no buggy member
    int ungrouped_false_alarms = 0;  // flagged benign breakpoints, counted singly
    int ungrouped_detections = 0;    // flagged buggy breakpoints
};

// Applies per-breakpoint flag decisions to the groups: a group is flagged
// iff any member is flagged and is a false alarm iff flagged without a
// buggy member. Breakpoints absent from `flagged` count as not flagged.
GroupVerdicts merge_flags(std::vector<BreakpointGroup> groups,
                          const std::map<std::string, bool>& flagged,
                          const std::set<std::string>& buggy_breakpoints);

// Edges file format: CSV `bp_a,bp_b`, one edge per line, `#` comments allowed.
std::vector<std::pair<std::string, std::string>> parse_edges_csv_text(
    const std::string& text);
std::vector<std::pair<std::string, std::string>> parse_edges_csv(
    const std::string& path);

}  // namespace invdiff
