#include "invdiff/subjects.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "invdiff/errors.hpp"

namespace invdiff {

std::string to_string(Outcome o) {
    return o == Outcome::kOk ? "ok" : "crash";
}

void Probe::bp(const std::string& breakpoint_id,
               std::initializer_list<std::pair<const char*, double>> values) {
    std::vector<VariableSnapshot> row;
    row.reserve(values.size());
    for (const auto& [name, value] : values) row.push_back({name, value});
    rows_[breakpoint_id].push_back(std::move(row));
}

void Probe::branch(const std::string& id) {
    branches_.insert(id);
}

std::vector<int> decode_i16(const std::vector<std::uint8_t>& bytes,
                            std::size_t max_values) {
    std::vector<int> out;
    for (std::size_t i = 0; i + 1 < bytes.size() && out.size() < max_values; i += 2) {
        const std::uint16_t raw =
            static_cast<std::uint16_t>(bytes[i] | (bytes[i + 1] << 8));
        out.push_back(static_cast<std::int16_t>(raw));
    }
    return out;
}

std::vector<std::uint8_t> encode_i16(const std::vector<int>& values) {
    std::vector<std::uint8_t> out;
    out.reserve(values.size() * 2);
    for (int v : values) {
        const auto raw = static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
        out.push_back(static_cast<std::uint8_t>(raw & 0xff));
        out.push_back(static_cast<std::uint8_t>(raw >> 8));
    }
    return out;
}

namespace {

std::string join_ints(const std::vector<int>& xs) {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ',';
        out << xs[i];
    }
    return out.str();
}

// ---------------------------------------------------------------- subjects
//
// Each subject comes in three versions. "clean" is the original algorithm,
// "clean_alt" a behavior-preserving rewrite, "buggy" derives from clean_alt
// with a deliberate defect. Probe rounds for clean and clean_alt are value-
// identical for every input except in gcd and permutation, whose alternative
// implementations legitimately reorder work (swapped recursion parameters
// and reversed choice order).

// --- array concatenation: defect writes the second array one slot early.
Outcome run_array_concat(int variant, const std::vector<std::uint8_t>& input,
                         Probe& p, std::string& output) {
    const auto xs = decode_i16(input);
    if (xs.size() < 2) return Outcome::kCrash;
    const int na = static_cast<int>(xs.size()) / 2;
    const int nb = static_cast<int>(xs.size()) - na;
    const int n = na + nb;
    if (n % 2 == 1) p.branch("ac_odd");
    if (n > 8) p.branch("ac_long");
    std::vector<int> c(n, 0);
    for (int i = 0; i < na; ++i) c[i] = xs[i];
    for (int j = 0; j < nb; ++j) {
        const int k = variant == 2 ? na + j - 1 : na + j;
        const int vb = xs[na + j];
        c[k] = vb;
        p.bp("bp_copyb", {{"j", double(j)},
                          {"k", double(k)},
                          {"vb", double(vb)},
                          {"n", double(n)}});
    }
    p.bp("bp_done", {{"n", double(n)},
                     {"first", double(c.front())},
                     {"last", double(c.back())}});
    output = join_ints(c);
    return Outcome::kOk;
}

// --- bubble sort: defect shortens the inner pass by one comparison.
Outcome run_bubble_sort(int variant, const std::vector<std::uint8_t>& input,
                        Probe& p, std::string& output) {
    std::vector<int> a = decode_i16(input);
    if (a.empty()) return Outcome::kCrash;
    const int n = static_cast<int>(a.size());
    if (n > 6) p.branch("bs_long");

    auto body = [&](int i, int j) {
        if (a[j] > a[j + 1]) {
            p.branch("bs_swap");
            const int t = a[j];
            a[j] = a[j + 1];
            a[j + 1] = t;
        }
        p.bp("bp_inner", {{"i", double(i)},
                          {"j", double(j)},
                          {"lo", double(a[j])},
                          {"hi", double(a[j + 1])}});
    };

    if (variant == 0) {
        for (int i = 0; i < n - 1; ++i) {
            for (int j = 0; j < n - i - 1; ++j) body(i, j);
        }
    } else if (variant == 1) {
        int i = 0;
        while (i < n - 1) {
            int j = 0;
            while (j < n - i - 1) {
                body(i, j);
                ++j;
            }
            ++i;
        }
    } else {
        for (int i = 0; i < n - 1; ++i) {
            for (int j = 0; j < n - i - 2; ++j) body(i, j);
        }
    }
    p.bp("bp_done", {{"n", double(n)},
                     {"first", double(a.front())},
                     {"last", double(a.back())}});
    output = join_ints(a);
    return Outcome::kOk;
}

// --- factorial: defect stops the product one term early.
Outcome run_factorial(int variant, const std::vector<std::uint8_t>& input,
                      Probe& p, std::string& output) {
    const auto xs = decode_i16(input);
    if (xs.empty()) return Outcome::kCrash;
    const int n = xs[0];
    if (n < 0 || n > 20) return Outcome::kCrash;  // overflow guard
    if (n == 0) p.branch("fact_zero");
    if (n > 10) p.branch("fact_big");

    long long acc = 1;
    auto body = [&](int i) {
        acc *= i;
        p.bp("bp_loop", {{"i", double(i)}, {"acc", double(acc)}, {"n", double(n)}});
    };
    if (variant == 0) {
        for (int i = 1; i <= n; ++i) body(i);
    } else if (variant == 1) {
        int i = 1;
        while (i <= n) {
            body(i);
            ++i;
        }
    } else {
        for (int i = 1; i < n; ++i) body(i);
    }
    p.bp("bp_done", {{"n", double(n)}, {"acc", double(acc)}});
    output = std::to_string(acc);
    return Outcome::kOk;
}

// --- greatest common divisor: clean recurses gcd(b, a mod b); the
// alternative calls the same recursion with swapped parameters, shifting
// the trace by one leading round; the defect rewrites the base case to
// a <= 1 and accumulates a + b instead of carrying a, so the watched
// values run away from the clean chain. The loops below replay the
// recursions' entry sequences exactly.
Outcome run_gcd(int variant, const std::vector<std::uint8_t>& input, Probe& p,
                std::string& output) {
    const auto xs = decode_i16(input);
    if (xs.size() < 2) return Outcome::kCrash;
    const int a0 = std::abs(xs[0]);
    const int b0 = std::abs(xs[1]);
    if (a0 < b0) p.branch("gcd_lt");
    if (a0 == b0) p.branch("gcd_eq");
    if ((a0 ^ b0) & 1) p.branch("gcd_mixed_parity");

    int a = variant == 1 ? b0 : a0;
    int b = variant == 1 ? a0 : b0;
    int g = 0;
    for (;;) {
        p.bp("bp_entry", {{"a", double(a)}, {"b", double(b)}});
        if (variant == 2) {
            if (a <= 1) {
                g = b;
                break;
            }
            p.branch("gcd_rec");
            const int t = b % a;
            b = a + b;
            a = t;
        } else {
            if (b == 0) {
                g = a;
                break;
            }
            p.branch("gcd_rec");
            const int t = a % b;
            a = b;
            b = t;
        }
    }
    if (g == 0) p.branch("gcd_zero");
    p.bp("bp_done", {{"g", double(g)}, {"a0", double(a0)}, {"b0", double(b0)}});
    output = std::to_string(g);
    return Outcome::kOk;
}

// --- permutation: both clean versions enumerate by swap recursion (in
// opposite choice orders); the defect drops the swap-back, so later
// branches permute an already-mutated array.
Outcome run_permutation(int variant, const std::vector<std::uint8_t>& input,
                        Probe& p, std::string& output) {
    auto xs = decode_i16(input);
    if (xs.empty()) return Outcome::kCrash;
    const int n = std::min<int>(static_cast<int>(xs.size()), 5);
    std::vector<int> a(xs.begin(), xs.begin() + n);
    p.branch("perm_n" + std::to_string(n));

    int count = 0;
    std::vector<std::string> emitted;
    // count is deliberately not watched inside the recursion: it is not
    // touched by the swap statements, and watching it would only pair the
    // emission order with values, which differs between the two clean
    // enumeration orders.
    auto emit = [&]() {
        ++count;
        emitted.push_back(join_ints(a));
        p.bp("bp_emit", {{"head", double(a.front())}, {"tail", double(a.back())}});
    };
    auto probe_call = [&](int k, int i) {
        p.bp("bp_call", {{"k", double(k)},
                         {"i", double(i)},
                         {"head", double(a.front())},
                         {"tail", double(a.back())}});
    };

    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            emit();
            return;
        }
        if (variant == 0) {
            for (int i = k; i < n; ++i) {
                std::swap(a[k], a[i]);
                rec(k + 1);
                std::swap(a[k], a[i]);
                probe_call(k, i);
            }
        } else if (variant == 1) {
            for (int i = n - 1; i >= k; --i) {
                std::swap(a[k], a[i]);
                rec(k + 1);
                std::swap(a[k], a[i]);
                probe_call(k, i);
            }
        } else {
            for (int i = n - 1; i >= k; --i) {
                std::swap(a[k], a[i]);
                rec(k + 1);
                probe_call(k, i);
            }
        }
    };
    rec(0);
    p.bp("bp_done", {{"total", double(count)}, {"n", double(n)}});

    std::sort(emitted.begin(), emitted.end());
    std::ostringstream out;
    for (std::size_t i = 0; i < emitted.size(); ++i) {
        if (i) out << ';';
        out << emitted[i];
    }
    output = out.str();
    return Outcome::kOk;
}

// --- second maximum search: the update of sec on the non-max path was
// folded into a ternary that assigns sec to itself, so sec only ever
// advances when a new maximum arrives.
Outcome run_second_max(int variant, const std::vector<std::uint8_t>& input,
                       Probe& p, std::string& output) {
    const auto xs = decode_i16(input);
    if (xs.size() < 2) return Outcome::kCrash;
    int mx = std::max(xs[0], xs[1]);
    int sec = std::min(xs[0], xs[1]);
    for (std::size_t i = 2; i < xs.size(); ++i) {
        const int v = xs[i];
        if (variant == 0) {
            if (v > mx) {
                p.branch("sm_newmax");
                sec = mx;
                mx = v;
            } else if (v > sec && v < mx) {
                p.branch("sm_newsec");
                sec = v;
            }
        } else if (variant == 1) {
            if (v > mx) {
                p.branch("sm_newmax");
                sec = mx;
                mx = v;
            } else {
                if (v < mx && v > sec) {
                    p.branch("sm_newsec");
                    sec = v;
                }
            }
        } else {
            if (v > mx) {
                p.branch("sm_newmax");
                sec = mx;
                mx = v;
            }
            sec = (v > sec && v < mx) ? sec : sec;
        }
        p.bp("bp_loop", {{"i", double(i)},
                         {"v", double(v)},
                         {"mx", double(mx)},
                         {"sec", double(sec)}});
    }
    p.bp("bp_done", {{"mx", double(mx)}, {"sec", double(sec)}, {"n", double(xs.size())}});
    output = std::to_string(sec);
    return Outcome::kOk;
}

// --- string reversal: the in-place swap lost its temporary, mirroring the
// right half over the left.
Outcome run_string_reversal(int variant, const std::vector<std::uint8_t>& input,
                            Probe& p, std::string& output) {
    std::vector<std::uint8_t> s(input.begin(),
                                input.begin() + std::min<std::size_t>(input.size(), 64));
    if (s.empty()) return Outcome::kCrash;
    const int n = static_cast<int>(s.size());
    if (n % 2 == 1) p.branch("sr_odd");

    auto probe_swap = [&](int i, int j) {
        p.bp("bp_swap", {{"i", double(i)},
                         {"j", double(j)},
                         {"si", double(s[i])},
                         {"sj", double(s[j])}});
    };

    if (variant == 0) {
        for (int i = 0, j = n - 1; i < j; ++i, --j) {
            const std::uint8_t ci = s[j];
            const std::uint8_t cj = s[i];
            s[i] = ci;
            s[j] = cj;
            probe_swap(i, j);
        }
    } else if (variant == 1) {
        for (int k = 0; k < n / 2; ++k) {
            const int i = k;
            const int j = n - 1 - k;
            const std::uint8_t t = s[j];
            s[j] = s[i];
            s[i] = t;
            probe_swap(i, j);
        }
    } else {
        for (int i = 0, j = n - 1; i < j; ++i, --j) {
            s[i] = s[j];
            s[j] = s[i];
            probe_swap(i, j);
        }
    }
    const std::string text(s.begin(), s.end());
    p.bp("bp_done", {{"n", double(n)}, {"h", hash_string_value(text)}});

    std::ostringstream hex;
    for (std::uint8_t c : s) {
        static const char* digits = "0123456789abcdef";
        hex << digits[c >> 4] << digits[c & 0xf];
    }
    output = hex.str();
    return Outcome::kOk;
}

SubjectFn bind_variant(Outcome (*fn)(int, const std::vector<std::uint8_t>&, Probe&,
                                     std::string&),
                       int variant) {
    return [fn, variant](const std::vector<std::uint8_t>& input, Probe& probe,
                         std::string& output) { return fn(variant, input, probe, output); };
}

SubjectPair make_subject(
    std::string name, std::string title, std::string input_schema,
    Outcome (*fn)(int, const std::vector<std::uint8_t>&, Probe&, std::string&),
    std::vector<BreakpointDecl> breakpoints,
    std::vector<std::pair<std::string, std::string>> edges, GroundTruthDecl truth,
    std::vector<std::vector<std::uint8_t>> seeds, std::string source_name,
    std::string source_text) {
    SubjectPair s;
    s.name = std::move(name);
    s.title = std::move(title);
    s.input_schema = std::move(input_schema);
    s.versions[kVersionClean] = bind_variant(fn, 0);
    s.versions[kVersionCleanAlt] = bind_variant(fn, 1);
    s.versions[kVersionBuggy] = bind_variant(fn, 2);
    s.breakpoints = std::move(breakpoints);
    s.dependency_edges = std::move(edges);
    s.ground_truth = std::move(truth);
    s.seed_inputs = std::move(seeds);
    s.source_name = std::move(source_name);
    s.source_text = std::move(source_text);
    return s;
}

std::vector<SubjectPair> build_subjects() {
    std::vector<SubjectPair> subjects;

    subjects.push_back(make_subject(
        "array_concat", "array concatenation", "i16-array",
        run_array_concat,
        {{"bp_copyb", "concat", 10, {"j", "k", "vb", "n"}},
         {"bp_done", "concat", 11, {"n", "first", "last"}}},
        {{"bp_copyb", "bp_done"}},
        {{"bp_copyb"}, {6, 7, 8, 9, 10}, AnnotationKind::kChangedBlock},
        {encode_i16({1, 2, 3, 4, 5}), encode_i16({7, 7})},
        "array_concat.c",
        "int concat(const int *a, int na, const int *b, int nb, int *c) {\n"
        "    int n = na + nb;\n"
        "    for (int i = 0; i < na; i++) {\n"
        "        c[i] = a[i];\n"
        "    }\n"
        "    for (int j = 0; j < nb; j++) {\n"
        "        int k = na + j - 1;\n"
        "        int vb = b[j];\n"
        "        c[k] = vb;\n"
        "    }\n"
        "    return n;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "bubble_sort", "bubble sort", "i16-array",
        run_bubble_sort,
        {{"bp_inner", "bubble_sort", 9, {"i", "j", "lo", "hi"}},
         {"bp_done", "bubble_sort", 11, {"n", "first", "last"}}},
        {{"bp_inner", "bp_done"}},
        {{"bp_inner"}, {3}, AnnotationKind::kChangedStatement},
        {encode_i16({5, 3, 9, 1}), encode_i16({2, 1, 3})},
        "bubble_sort.c",
        "void bubble_sort(int *a, int n) {\n"
        "    for (int i = 0; i < n - 1; i++) {\n"
        "        for (int j = 0; j < n - i - 2; j++) {\n"
        "            if (a[j] > a[j + 1]) {\n"
        "                int t = a[j];\n"
        "                a[j] = a[j + 1];\n"
        "                a[j + 1] = t;\n"
        "            }\n"
        "        }\n"
        "    }\n"
        "    return;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "factorial", "factorial", "i16-scalar",
        run_factorial,
        {{"bp_loop", "factorial", 5, {"i", "acc", "n"}},
         {"bp_done", "factorial", 6, {"n", "acc"}}},
        {{"bp_loop", "bp_done"}},
        {{"bp_loop"}, {3}, AnnotationKind::kChangedStatement},
        {encode_i16({5}), encode_i16({0})},
        "factorial.c",
        "long factorial(int n) {\n"
        "    long acc = 1;\n"
        "    for (int i = 1; i < n; i++) {\n"
        "        acc = acc * i;\n"
        "    }\n"
        "    return acc;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "gcd", "greatest common divisor", "i16-pair",
        run_gcd,
        {{"bp_entry", "gcd", 2, {"a", "b"}},
         {"bp_done", "run_gcd", 10, {"g", "a0", "b0"}}},
        {{"bp_entry", "bp_done"}},
        {{"bp_entry"}, {2, 3, 4}, AnnotationKind::kChangedBlock},
        {encode_i16({12, 18}), encode_i16({7, 3})},
        "gcd.c",
        "int gcd(int a, int b) {\n"
        "    if (a <= 1) {\n"
        "        return b;\n"
        "    }\n"
        "    return gcd(b % a, a + b);\n"
        "}\n"
        "\n"
        "int run_gcd(int a0, int b0) {\n"
        "    int g = gcd(a0, b0);\n"
        "    return g;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "permutation", "permutation", "i16-array",
        run_permutation,
        {{"bp_call", "permute", 9, {"k", "i", "head", "tail"}},
         {"bp_emit", "permute", 3, {"head", "tail"}},
         {"bp_done", "run_permute", 15, {"total", "n"}}},
        {{"bp_call", "bp_emit"}, {"bp_emit", "bp_done"}},
        {{"bp_call"}, {6, 7, 8, 9}, AnnotationKind::kChangedBlock},
        {encode_i16({3, 1, 2}), encode_i16({1, 2})},
        "permutation.c",
        "void permute(int *a, int n, int k, int *count) {\n"
        "    if (k == n) {\n"
        "        *count = *count + 1;\n"
        "        return;\n"
        "    }\n"
        "    for (int i = n - 1; i >= k; i--) {\n"
        "        swap_items(a, k, i);\n"
        "        permute(a, n, k + 1, count);\n"
        "    }\n"
        "}\n"
        "\n"
        "int run_permute(int *a, int n) {\n"
        "    int count = 0;\n"
        "    permute(a, n, 0, &count);\n"
        "    return count;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "second_max", "second maximum search", "i16-array",
        run_second_max,
        {{"bp_loop", "find_second_max", 11, {"i", "v", "mx", "sec"}},
         {"bp_done", "find_second_max", 12, {"mx", "sec", "n"}}},
        {{"bp_loop", "bp_done"}},
        {{"bp_loop"}, {10}, AnnotationKind::kChangedStatement},
        {encode_i16({5, 3, 9, 1}), encode_i16({2, 8, 4})},
        "second_max.c",
        "int find_second_max(const int *a, int n) {\n"
        "    int mx = a[0] > a[1] ? a[0] : a[1];\n"
        "    int sec = a[0] > a[1] ? a[1] : a[0];\n"
        "    for (int i = 2; i < n; i++) {\n"
        "        int v = a[i];\n"
        "        if (v > mx) {\n"
        "            sec = mx;\n"
        "            mx = v;\n"
        "        }\n"
        "        sec = (v > sec && v < mx) ? sec : sec;\n"
        "    }\n"
        "    return sec;\n"
        "}\n"));

    subjects.push_back(make_subject(
        "string_reversal", "string reversal", "bytes",
        run_string_reversal,
        {{"bp_swap", "reverse", 5, {"i", "j", "si", "sj"}},
         {"bp_done", "reverse", 6, {"n", "h"}}},
        {{"bp_swap", "bp_done"}},
        {{"bp_swap"}, {3, 4}, AnnotationKind::kChangedStatement},
        {{'h', 'e', 'l', 'l', 'o'}, {'a', 'b'}},
        "string_reversal.c",
        "void reverse(char *s, int n) {\n"
        "    for (int i = 0, j = n - 1; i < j; i++, j--) {\n"
        "        s[i] = s[j];\n"
        "        s[j] = s[i];\n"
        "    }\n"
        "    return;\n"
        "}\n"));

    return subjects;
}

}  // namespace

const BreakpointDecl* SubjectPair::breakpoint(const std::string& id) const {
    for (const auto& bp : breakpoints) {
        if (bp.id == id) return &bp;
    }
    return nullptr;
}

const std::vector<SubjectPair>& list_subjects() {
    static const std::vector<SubjectPair> subjects = build_subjects();
    return subjects;
}

const SubjectPair& subject_by_name(const std::string& name) {
    for (const auto& s : list_subjects()) {
        if (s.name == name) return s;
    }
    throw ConfigError("unknown subject '" + name + "'");
}

SubjectRun run_subject(const SubjectPair& subject, const std::string& version_tag,
                       const std::vector<std::uint8_t>& input, Version role,
                       const std::string& input_id) {
    auto it = subject.versions.find(version_tag);
    if (it == subject.versions.end()) {
        throw ConfigError("subject '" + subject.name + "' has no version '" +
                          version_tag + "'");
    }
    Probe probe;
    SubjectRun run;
    run.outcome = it->second(input, probe, run.output);
    run.branches = probe.branches();

    for (const auto& decl : subject.breakpoints) {
        TraceSet t;
        t.input_id = input_id;
        t.version = role;
        t.breakpoint_id = decl.id;
        auto rows = probe.rows().find(decl.id);
        if (rows != probe.rows().end()) {
            t.rows.reserve(rows->second.size());
            for (std::size_t r = 0; r < rows->second.size(); ++r) {
                TraceRow row;
                row.round_index = static_cast<int>(r);
                row.snapshots = rows->second[r];
                t.rows.push_back(std::move(row));
            }
        }
        validate_trace_set(t);
        run.traces.push_back(std::move(t));
    }
    return run;
}

}  // namespace invdiff
