#include "invdiff/distance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "invdiff/errors.hpp"
#include "invdiff/numeric.hpp"

namespace invdiff {

DistanceVector distance_vector(const InvariantSet& u, const InvariantSet& v) {
    if (u.breakpoint_id != v.breakpoint_id || u.input_id != v.input_id) {
        throw UsageError("distance_vector: sets belong to different observations (" +
                         u.breakpoint_id + "/" + u.input_id + " vs " +
                         v.breakpoint_id + "/" + v.input_id + ")");
    }

    DistanceVector d;
    d.breakpoint_id = u.breakpoint_id;
    d.input_id = u.input_id;

    const auto& a = u.invariants;
    const auto& b = v.invariants;

    if (a.empty() && b.empty()) {
        d.no_invariants = true;  // agreement: nothing observed on either side
        return d;
    }
    if (a.empty() || b.empty()) {
        d.one_sided = true;
        d.dice = d.jaccard = d.overlap = d.hamming_norm = 1.0;
        d.hamming_raw = a.empty() ? b.size() : a.size();
        return d;
    }

    std::size_t inter = 0;
    for (const auto& inv : a) inter += b.count(inv);
    const std::size_t uni = a.size() + b.size() - inter;

    d.dice = 1.0 - 2.0 * static_cast<double>(inter) /
                       static_cast<double>(a.size() + b.size());
    d.jaccard = 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
    d.overlap = 1.0 - static_cast<double>(inter) /
                          static_cast<double>(std::min(a.size(), b.size()));
    d.hamming_raw = uni - inter;  // |U symdiff V|
    d.hamming_norm = static_cast<double>(d.hamming_raw) / static_cast<double>(uni);
    return d;
}

std::string distances_csv(const std::vector<DistanceVector>& vectors) {
    std::ostringstream out;
    out << "breakpoint_id,input_id,dice,jaccard,overlap,hamming_raw,hamming_norm,one_sided\n";
    for (const auto& d : vectors) {
        if (d.no_invariants) continue;
        out << d.breakpoint_id << ',' << d.input_id << ',' << format_double(d.dice)
            << ',' << format_double(d.jaccard) << ',' << format_double(d.overlap)
            << ',' << d.hamming_raw << ',' << format_double(d.hamming_norm) << ','
            << (d.one_sided ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<DistanceVector> parse_distances_csv_text(const std::string& text) {
    std::vector<DistanceVector> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("breakpoint_id,", 0) == 0) continue;
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        if (cells.size() != 8) {
            throw ParseError("distances row needs 8 columns", line_no);
        }
        DistanceVector d;
        d.breakpoint_id = cells[0];
        d.input_id = cells[1];
        d.dice = parse_decimal(cells[2]);
        d.jaccard = parse_decimal(cells[3]);
        d.overlap = parse_decimal(cells[4]);
        d.hamming_raw = static_cast<std::uint64_t>(parse_decimal(cells[5]));
        d.hamming_norm = parse_decimal(cells[6]);
        d.one_sided = cells[7] == "1" || cells[7] == "true";
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DistanceVector> parse_distances_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open distances CSV '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_distances_csv_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_distances_csv(const std::string& path,
                         const std::vector<DistanceVector>& vectors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write distances CSV '" + path + "'");
    out << distances_csv(vectors);
}

}  // namespace invdiff
