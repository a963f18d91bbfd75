#include "invdiff/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/numeric.hpp"

namespace invdiff {

std::string to_string(Version v) {
    return v == Version::kClean ? "clean" : "buggy";
}

Version version_from_string(const std::string& s) {
    if (s == "clean") return Version::kClean;
    if (s == "buggy") return Version::kBuggy;
    throw ParseError("unknown version tag '" + s + "' (expected clean or buggy)");
}

std::vector<std::string> TraceSet::variable_names() const {
    std::vector<std::string> names;
    if (rows.empty()) return names;
    names.reserve(rows.front().snapshots.size());
    for (const auto& snap : rows.front().snapshots) names.push_back(snap.name);
    return names;
}

double hash_string_value(std::string_view bytes) {
    return static_cast<double>(fnv1a64(bytes));
}

namespace {

bool valid_identifier(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' ||
                        c == '.' || c == ':' || c == '#' || c == '/';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void validate_trace_set(const TraceSet& t) {
    if (!valid_identifier(t.breakpoint_id) || !valid_identifier(t.input_id)) {
        throw ValidationError("trace set has an empty or non-portable identifier");
    }
    std::vector<std::string> names;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const TraceRow& row = t.rows[r];
        if (row.round_index != static_cast<int>(r)) {
            throw ValidationError("rows of " + t.breakpoint_id +
                                  " are not indexed 0..n-1 in order");
        }
        if (row.snapshots.empty()) {
            throw ValidationError("breakpoint " + t.breakpoint_id + " row " +
                                  std::to_string(r) + " has no variables");
        }
        if (row.snapshots.size() > kMaxWatchedVariables) {
            throw ValidationError("breakpoint " + t.breakpoint_id + " row " +
                                  std::to_string(r) + " watches " +
                                  std::to_string(row.snapshots.size()) +
                                  " variables, limit is " +
                                  std::to_string(kMaxWatchedVariables));
        }
        std::vector<std::string> row_names;
        std::set<std::string> seen;
        for (const auto& snap : row.snapshots) {
            if (!valid_identifier(snap.name)) {
                throw ValidationError("invalid variable name '" + snap.name + "'");
            }
            if (!seen.insert(snap.name).second) {
                throw ValidationError("duplicate variable '" + snap.name +
                                      "' in one row of " + t.breakpoint_id);
            }
            if (!std::isfinite(snap.value)) {
                throw ValidationError("non-finite value for '" + snap.name +
                                      "' at " + t.breakpoint_id);
            }
            row_names.push_back(snap.name);
        }
        if (r == 0) {
            names = row_names;
        } else if (row_names != names) {
            throw ValidationError("variable set changes between rows of " +
                                  t.breakpoint_id);
        }
    }
}

std::vector<TraceSet> parse_trace_text(const std::string& text) {
    std::vector<TraceSet> out;
    TraceSet current;
    std::vector<std::string> vars;
    bool in_record = false;
    bool vars_seen = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    auto flush = [&]() {
        if (in_record) {
            validate_trace_set(current);
            out.push_back(std::move(current));
            current = TraceSet{};
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (line.rfind("#bp ", 0) == 0) {
            flush();
            auto fields = split(line.substr(4), ' ');
            if (fields.size() != 3) {
                throw ParseError("#bp header needs '<breakpoint> <version> <input>'", line_no);
            }
            current.breakpoint_id = fields[0];
            current.version = version_from_string(fields[1]);
            current.input_id = fields[2];
            in_record = true;
            vars_seen = false;
            vars.clear();
            continue;
        }
        if (line.rfind("#vars", 0) == 0) {
            if (!in_record || vars_seen) {
                throw ParseError("#vars line outside a record", line_no);
            }
            std::string rest = line.size() > 5 ? line.substr(6) : "";
            if (line.size() > 5 && line[5] != ' ') {
                throw ParseError("malformed #vars line", line_no);
            }
            vars = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
            if (vars.size() > kMaxWatchedVariables) {
                throw ValidationError("breakpoint " + current.breakpoint_id +
                                      " declares " + std::to_string(vars.size()) +
                                      " variables, limit is " +
                                      std::to_string(kMaxWatchedVariables) +
                                      " (line " + std::to_string(line_no) + ")");
            }
            vars_seen = true;
            continue;
        }
        if (!in_record || !vars_seen) {
            throw ParseError("data line outside a record", line_no);
        }
        auto cells = split(line, ',');
        if (cells.size() != vars.size()) {
            throw ParseError("row has " + std::to_string(cells.size()) +
                                 " values, header declares " +
                                 std::to_string(vars.size()),
                             line_no);
        }
        TraceRow row;
        row.round_index = static_cast<int>(current.rows.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v;
            try {
                v = parse_decimal(cells[i]);
            } catch (const ParseError& e) {
                throw ParseError(std::string(e.what()), line_no);
            }
            row.snapshots.push_back({vars[i], v});
        }
        current.rows.push_back(std::move(row));
    }
    flush();
    return out;
}

std::vector<TraceSet> parse_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open trace file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_trace_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string serialize_trace_sets(const std::vector<TraceSet>& sets) {
    std::ostringstream out;
    for (const auto& t : sets) {
        validate_trace_set(t);
        out << "#bp " << t.breakpoint_id << ' ' << to_string(t.version) << ' '
            << t.input_id << '\n';
        out << "#vars";
        const auto names = t.variable_names();
        for (std::size_t i = 0; i < names.size(); ++i) {
            out << (i == 0 ? " " : ",") << names[i];
        }
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.snapshots.size(); ++i) {
                if (i) out << ',';
                out << format_decimal(row.snapshots[i].value);
            }
            out << '\n';
        }
    }
    return out.str();
}

void write_trace_file(const std::string& path, const std::vector<TraceSet>& sets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write trace file '" + path + "'");
    out << serialize_trace_sets(sets);
}

TraceSet sample_traces(const TraceSet& t, std::size_t cap, std::uint64_t seed) {
    if (cap < 1) throw UsageError("sample cap must be >= 1");
    if (t.rows.size() <= cap) return t;

    // Partial Fisher-Yates over row indices, then restore original order.
    const std::size_t n = t.rows.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());

    TraceSet out;
    out.input_id = t.input_id;
    out.version = t.version;
    out.breakpoint_id = t.breakpoint_id;
    out.rows.reserve(cap);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        TraceRow row = t.rows[idx[k]];
        row.round_index = static_cast<int>(k);
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace invdiff
