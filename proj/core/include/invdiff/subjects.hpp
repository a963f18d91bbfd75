#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "invdiff/blocks.hpp"
#include "invdiff/trace.hpp"

namespace invdiff {

inline const std::string kVersionClean = "clean";
inline const std::string kVersionCleanAlt = "clean_alt";
inline const std::string kVersionBuggy = "buggy";

enum class Outcome { kOk, kCrash };

std::string to_string(Outcome o);

// Probe sink filled in by an executing subject. bp() appends one execution
// round at a breakpoint; branch() records a coverage probe id.
class Probe {
public:
    void bp(const std::string& breakpoint_id,
            std::initializer_list<std::pair<const char*, double>> values);
    void branch(const std::string& id);

    const std::map<std::string, std::vector<std::vector<VariableSnapshot>>>& rows()
        const {
        return rows_;
    }
    const std::set<std::string>& branches() const { return branches_; }

private:
    std::map<std::string, std::vector<std::vector<VariableSnapshot>>> rows_;
    std::set<std::string> branches_;
};

// A subject version: consumes raw input bytes, emits probes, and returns
// (outcome, canonical output). Crash covers both guard trips and inputs the
// subject's schema rejects.
using SubjectFn =
    std::function<Outcome(const std::vector<std::uint8_t>& input, Probe& probe,
                          std::string& output)>;

struct BreakpointDecl {
    std::string id;
    std::string function;
    int line = 0;  // in the bundled source
    std::vector<std::string> watched;
};

struct GroundTruthDecl {
    std::set<std::string> buggy_breakpoints;
    std::vector<int> changed_lines;       // defect lines in the bundled source
    AnnotationKind change_kind = AnnotationKind::kChangedStatement;
};

// One of the built-in example programs: three versions (clean, clean_alt,
// buggy), declared breakpoints with watched variables, dependency edges,
// ground truth, fuzzing seeds, and the buggy version rendered as C-like
// source for block-level mapping.
struct SubjectPair {
    std::string name;
    std::string title;
    std::string input_schema;
    std::map<std::string, SubjectFn> versions;
    std::vector<BreakpointDecl> breakpoints;
    std::vector<std::pair<std::string, std::string>> dependency_edges;
    GroundTruthDecl ground_truth;
    std::vector<std::vector<std::uint8_t>> seed_inputs;
    std::string source_name;  // e.g. "second_max.c"
    std::string source_text;

    const BreakpointDecl* breakpoint(const std::string& id) const;
};

// The seven built-in subjects, in a fixed order.
const std::vector<SubjectPair>& list_subjects();
const SubjectPair& subject_by_name(const std::string& name);

struct SubjectRun {
    Outcome outcome = Outcome::kOk;
    std::string output;
    std::vector<TraceSet> traces;          // one per declared breakpoint
    std::set<std::string> branches;        // coverage probe ids
};

// Runs one version on one input. Every declared breakpoint yields a
// TraceSet (zero rows when unreached), stamped with `role` and `input_id`.
SubjectRun run_subject(const SubjectPair& subject, const std::string& version_tag,
                       const std::vector<std::uint8_t>& input, Version role,
                       const std::string& input_id);

// Input codecs shared by subjects, tests and seed construction.
std::vector<int> decode_i16(const std::vector<std::uint8_t>& bytes,
                            std::size_t max_values = 32);
std::vector<std::uint8_t> encode_i16(const std::vector<int>& values);

}  // namespace invdiff
