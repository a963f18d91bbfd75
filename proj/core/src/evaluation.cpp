#include "invdiff/evaluation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "invdiff/numeric.hpp"

namespace invdiff {

std::string to_string(Level level) {
    switch (level) {
        case Level::kFile: return "file";
        case Level::kFunction: return "function";
        case Level::kBlock: return "block";
    }
    return "file";
}

const std::string& UnitRef::at(Level level) const {
    switch (level) {
        case Level::kFile: return file;
        case Level::kFunction: return function;
        case Level::kBlock: return block;
    }
    return file;
}

const std::set<std::string>& GroundTruth::buggy(Level level) const {
    switch (level) {
        case Level::kFile: return buggy_files;
        case Level::kFunction: return buggy_functions;
        case Level::kBlock: return buggy_blocks;
    }
    return buggy_files;
}

const std::set<std::string>& GroundTruth::benign(Level level) const {
    switch (level) {
        case Level::kFile: return benign_files;
        case Level::kFunction: return benign_functions;
        case Level::kBlock: return benign_blocks;
    }
    return benign_files;
}

HitResult hit_rate(const std::vector<UnitRef>& flags, const GroundTruth& truth,
                   Level level) {
    HitResult r;
    int mapped = 0, buggy_hits = 0;
    for (const auto& flag : flags) {
        const std::string& unit = flag.at(level);
        if (!unit.empty() && truth.buggy(level).count(unit)) {
            ++mapped;
            ++buggy_hits;
        } else if (!unit.empty() && truth.benign(level).count(unit)) {
            ++mapped;
        } else {
            ++r.unmapped;
        }
    }
    r.detected = buggy_hits > 0;
    r.false_alarm = mapped > 0 && buggy_hits == 0;
    return r;
}

std::vector<SummaryRow> summarize(const std::vector<BugOutcome>& outcomes) {
    struct Agg {
        int detected = 0;
        int false_alarm = 0;
        int n = 0;
    };
    std::map<std::pair<std::string, std::string>, Agg> acc;
    std::map<std::pair<std::string, std::string>, Level> level_of;
    for (const auto& o : outcomes) {
        const auto key = std::make_pair(o.tool, to_string(o.level));
        auto& a = acc[key];
        a.n += 1;
        a.detected += o.detected ? 1 : 0;
        a.false_alarm += o.false_alarm ? 1 : 0;
        level_of[key] = o.level;
    }

    std::vector<SummaryRow> rows;
    for (const auto& [key, a] : acc) {
        SummaryRow row;
        row.tool = key.first;
        row.level = level_of[key];
        row.n_bugs = a.n;
        row.detected_pct = a.n ? 100.0 * a.detected / a.n : 0.0;
        row.false_alarm_pct = a.n ? 100.0 * a.false_alarm / a.n : 0.0;
        rows.push_back(row);
    }
    // file, function, block within each tool
    std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        if (a.tool != b.tool) return a.tool < b.tool;
        return static_cast<int>(a.level) < static_cast<int>(b.level);
    });
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "tool,level,detected_pct,false_alarm_pct,n_bugs\n";
    for (const auto& r : rows) {
        out << r.tool << ',' << to_string(r.level) << ',' << format_double(r.detected_pct)
            << ',' << format_double(r.false_alarm_pct) << ',' << r.n_bugs << '\n';
    }
    return out.str();
}

}  // namespace invdiff
