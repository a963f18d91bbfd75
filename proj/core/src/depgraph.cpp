#include "invdiff/depgraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "invdiff/errors.hpp"

namespace invdiff {

std::vector<BreakpointGroup> group_breakpoints(
    const std::vector<std::string>& breakpoints,
    const std::vector<std::pair<std::string, std::string>>& edges) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        index[breakpoints[i]] = i;
    }

    // Union-find over breakpoint indices.
    std::vector<std::size_t> parent(breakpoints.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (const auto& [a, b] : edges) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) {
            throw ValidationError("dependency edge references unknown breakpoint '" +
                                  (ia == index.end() ? a : b) + "'");
        }
        parent[find(ia->second)] = find(ib->second);
    }

    std::map<std::size_t, BreakpointGroup> by_root;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        by_root[find(i)].members.insert(breakpoints[i]);
    }

    std::vector<BreakpointGroup> groups;
    groups.reserve(by_root.size());
    for (auto& [root, g] : by_root) groups.push_back(std::move(g));
    std::sort(groups.begin(), groups.end(),
              [](const BreakpointGroup& a, const BreakpointGroup& b) {
                  return *a.members.begin() < *b.members.begin();
              });
    for (auto& g : groups) g.group_id = "grp_" + *g.members.begin();
    return groups;
}

GroupVerdicts merge_flags(std::vector<BreakpointGroup> groups,
                          const std::map<std::string, bool>& flagged,
                          const std::set<std::string>& buggy_breakpoints) {
    GroupVerdicts v;
    auto is_flagged = [&](const std::string& bp) {
        auto it = flagged.find(bp);
        return it != flagged.end() && it->second;
    };

    for (auto& g : groups) {
        g.flagged = false;
        g.contains_buggy = false;
        for (const auto& bp : g.members) {
            const bool f = is_flagged(bp);
            const bool buggy = buggy_breakpoints.count(bp) > 0;
            if (f) g.flagged = true;
            if (buggy) g.contains_buggy = true;
            if (f && buggy) ++v.ungrouped_detections;
            if (f && !buggy) ++v.ungrouped_false_alarms;
        }
        if (g.flagged) ++v.flagged_groups;
        if (g.flagged && g.contains_buggy) ++v.detected_groups;
        if (g.flagged && !g.contains_buggy) ++v.grouped_false_alarms;
    }
    v.groups = std::move(groups);
    return v;
}

std::vector<std::pair<std::string, std::string>> parse_edges_csv_text(
    const std::string& text) {
    std::vector<std::pair<std::string, std::string>> edges;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "bp_a,bp_b") continue;  // optional header
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError("edge row needs exactly 'bp_a,bp_b'", line_no);
        }
        edges.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return edges;
}

std::vector<std::pair<std::string, std::string>> parse_edges_csv(
    const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open edges CSV '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_edges_csv_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace invdiff
