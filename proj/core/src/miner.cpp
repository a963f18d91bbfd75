#include "invdiff/miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/numeric.hpp"

namespace invdiff {

std::string to_string(MineStatus s) {
    switch (s) {
        case MineStatus::kOk: return "ok";
        case MineStatus::kTimeoutPartial: return "timeout_partial";
        case MineStatus::kEmptyTrace: return "empty_trace";
    }
    return "ok";
}

std::string canonical_const(const std::string& v, double c) {
    return v + " == " + format_decimal(c);
}
std::string canonical_lower_bound(const std::string& v, double lo) {
    return v + " >= " + format_decimal(lo);
}
std::string canonical_upper_bound(const std::string& v, double hi) {
    return v + " <= " + format_decimal(hi);
}
std::string canonical_nonzero(const std::string& v) {
    return v + " != 0";
}
std::string canonical_equal(const std::string& a, const std::string& b) {
    return a < b ? a + " == " + b : b + " == " + a;
}
std::string canonical_le(const std::string& lhs, const std::string& rhs) {
    return lhs + " <= " + rhs;
}
std::string canonical_linear(const std::string& vi, int a, const std::string& vj,
                             double b) {
    return vi + " == " + std::to_string(a) + "*" + vj + " + " + format_decimal(b);
}

InvariantSet mine_invariants(const TraceSet& t,
                             std::chrono::duration<double> timeout) {
    validate_trace_set(t);

    InvariantSet out;
    out.breakpoint_id = t.breakpoint_id;
    out.input_id = t.input_id;
    out.version = t.version;

    if (t.rows.empty()) {
        out.status = MineStatus::kEmptyTrace;
        return out;
    }

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(timeout);
    auto timed_out = [&]() { return std::chrono::steady_clock::now() >= deadline; };

    // Column view, sorted by variable name so results do not depend on
    // snapshot insertion order.
    const std::size_t n_rows = t.rows.size();
    std::vector<std::string> names = t.variable_names();
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });

    std::vector<std::string> var;
    std::vector<std::vector<double>> col;
    for (std::size_t k : order) {
        var.push_back(names[k]);
        std::vector<double> column(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) {
            column[r] = t.rows[r].snapshots[k].value;
        }
        col.push_back(std::move(column));
    }
    const std::size_t n_vars = var.size();

    out.status = MineStatus::kOk;
    auto bail = [&]() {
        out.status = MineStatus::kTimeoutPartial;
        return out;
    };

    // Per-variable templates.
    for (std::size_t i = 0; i < n_vars; ++i) {
        if (timed_out()) return bail();
        double lo = col[i][0], hi = col[i][0];
        bool has_zero = false;
        for (double v : col[i]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v == 0.0) has_zero = true;
        }
        out.invariants.insert(canonical_lower_bound(var[i], lo));
        out.invariants.insert(canonical_upper_bound(var[i], hi));
        if (lo == hi) out.invariants.insert(canonical_const(var[i], lo));
        if (n_rows >= 2 && !has_zero) {
            out.invariants.insert(canonical_nonzero(var[i]));
        }
    }

    // Single-row sets are underdetermined beyond constants and bounds.
    if (n_rows < 2) return out;

    // Pairwise templates over ordered pairs (i, j), i != j.
    for (std::size_t i = 0; i < n_vars; ++i) {
        for (std::size_t j = 0; j < n_vars; ++j) {
            if (i == j) continue;
            if (timed_out()) return bail();

            bool all_eq = true, all_le = true;
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (col[i][r] != col[j][r]) all_eq = false;
                if (!(col[i][r] <= col[j][r])) all_le = false;
            }
            if (all_eq && i < j) {
                out.invariants.insert(canonical_equal(var[i], var[j]));
            }
            if (all_le) {
                out.invariants.insert(canonical_le(var[i], var[j]));
            }

            // vi == a*vj + b from the first two rows with distinct vj.
            std::size_t k = 0;
            while (k < n_rows && col[j][k] == col[j][0]) ++k;
            if (k == n_rows) continue;  // vj constant
            const double dj = col[j][0] - col[j][k];
            const double di = col[i][0] - col[i][k];
            const double slope = di / dj;
            const double rounded = std::nearbyint(slope);
            if (rounded == 0.0 || std::abs(rounded) > kLinearCoefMax) continue;
            const int a = static_cast<int>(rounded);
            if (a * dj != di) continue;  // not an exact integer slope
            const double b = col[i][0] - a * col[j][0];
            if (std::abs(b) > kLinearInterceptMax) continue;
            bool holds = true;
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (col[i][r] != a * col[j][r] + b) {
                    holds = false;
                    break;
                }
            }
            if (holds) {
                out.invariants.insert(canonical_linear(var[i], a, var[j], b));
            }
        }
    }
    return out;
}

std::string serialize_invariant_sets(const std::vector<InvariantSet>& sets) {
    std::ostringstream out;
    for (const auto& s : sets) {
        out << "#set " << s.breakpoint_id << ' ' << to_string(s.version) << ' '
            << s.input_id << '\n';
        for (const auto& inv : s.invariants) out << inv << '\n';
    }
    return out.str();
}

std::vector<InvariantSet> parse_invariant_text(const std::string& text) {
    std::vector<InvariantSet> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool in_set = false;
    InvariantSet current;

    auto flush = [&]() {
        if (in_set) {
            // A dump cannot distinguish an empty timeout_partial set from an
            // unreached breakpoint; both behave as "no invariants" downstream.
            if (current.invariants.empty()) current.status = MineStatus::kEmptyTrace;
            out.push_back(std::move(current));
            current = InvariantSet{};
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("#set ", 0) == 0) {
            flush();
            std::istringstream hdr(line.substr(5));
            std::string bp, ver, input, extra;
            if (!(hdr >> bp >> ver >> input) || (hdr >> extra)) {
                throw ParseError("#set header needs '<breakpoint> <version> <input>'",
                                 line_no);
            }
            current.breakpoint_id = bp;
            current.version = version_from_string(ver);
            current.input_id = input;
            current.status = MineStatus::kOk;
            in_set = true;
            continue;
        }
        if (!in_set) throw ParseError("invariant line outside a #set block", line_no);
        current.invariants.insert(line);
    }
    flush();
    return out;
}

std::vector<InvariantSet> parse_invariant_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open invariant file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_invariant_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_invariant_file(const std::string& path,
                          const std::vector<InvariantSet>& sets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write invariant file '" + path + "'");
    out << serialize_invariant_sets(sets);
}

}  // namespace invdiff
