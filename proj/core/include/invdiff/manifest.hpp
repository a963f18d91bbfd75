#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "invdiff/evaluation.hpp"
#include "invdiff/subjects.hpp"

namespace invdiff {

// Everything the evaluator needs to know about one subject, with block-level
// units resolved against the bundled source: per-breakpoint unit references
// and the buggy/benign unit universe at file, function and block level.
struct SubjectManifest {
    std::string name;
    std::string title;
    std::string input_schema;
    std::string source_name;
    std::string source_text;
    std::vector<BreakpointDecl> breakpoints;
    std::map<std::string, UnitRef> breakpoint_units;
    std::vector<std::pair<std::string, std::string>> dependency_edges;
    std::set<std::string> buggy_breakpoints;
    std::vector<int> changed_lines;
    std::string change_kind;  // "statement" or "block"
    GroundTruth truth;
};

// Resolves ground truth through the block mapper: the buggy block is the
// placement block of the declared change, benign units are every other
// block/function in the file. Also checks that the declared buggy
// breakpoint line matches the placement rules.
SubjectManifest build_manifest(const SubjectPair& subject);

std::string manifest_json(const std::vector<SubjectManifest>& manifests);
std::vector<SubjectManifest> parse_manifest_json(const std::string& text);
std::vector<SubjectManifest> load_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<SubjectManifest>& manifests);

}  // namespace invdiff
