#include "invdiff/manifest.hpp"

#include <fstream>
#include <sstream>

#include "invdiff/blocks.hpp"
#include "invdiff/errors.hpp"

#include "json.hpp"

namespace invdiff {

namespace {

std::string qualify(const std::string& file, const std::string& block_id) {
    return block_id == kFileLevelBlock ? block_id : file + "#" + block_id;
}

}  // namespace

SubjectManifest build_manifest(const SubjectPair& subject) {
    SubjectManifest m;
    m.name = subject.name;
    m.title = subject.title;
    m.input_schema = subject.input_schema;
    m.source_name = subject.source_name;
    m.source_text = subject.source_text;
    m.breakpoints = subject.breakpoints;
    m.dependency_edges = subject.dependency_edges;
    m.buggy_breakpoints = subject.ground_truth.buggy_breakpoints;
    m.changed_lines = subject.ground_truth.changed_lines;
    m.change_kind = subject.ground_truth.change_kind == AnnotationKind::kChangedBlock
                        ? "block"
                        : "statement";

    const BlockTree tree = parse_blocks(subject.source_text, subject.source_name);

    for (const auto& bp : subject.breakpoints) {
        UnitRef unit;
        unit.file = subject.source_name;
        unit.function = enclosing_function(tree, bp.line);
        unit.block = qualify(subject.source_name, enclosing_block(tree, bp.line));
        m.breakpoint_units[bp.id] = unit;
    }

    // The defect's block is where the placement rules put the breakpoint.
    std::vector<LineAnnotation> changes;
    for (int line : subject.ground_truth.changed_lines) {
        changes.push_back({line, subject.ground_truth.change_kind, ""});
    }
    const Placement placement = place_breakpoint(tree, changes);

    m.truth.buggy_files = {subject.source_name};
    for (int line : subject.ground_truth.changed_lines) {
        const std::string fn = enclosing_function(tree, line);
        if (!fn.empty()) m.truth.buggy_functions.insert(fn);
    }
    m.truth.buggy_blocks = {qualify(subject.source_name, placement.block_id)};

    for (const auto& node : tree.nodes) {
        const std::string id = qualify(subject.source_name, node.id);
        if (!m.truth.buggy_blocks.count(id)) m.truth.benign_blocks.insert(id);
        if (node.kind == BlockKind::kFunctionBody) {
            const std::string fn = enclosing_function(tree, node.start_line);
            if (!fn.empty() && !m.truth.buggy_functions.count(fn)) {
                m.truth.benign_functions.insert(fn);
            }
        }
    }
    return m;
}

namespace {

nlohmann::ordered_json truth_to_json(const GroundTruth& t) {
    nlohmann::ordered_json j;
    j["buggy_files"] = t.buggy_files;
    j["buggy_functions"] = t.buggy_functions;
    j["buggy_blocks"] = t.buggy_blocks;
    j["benign_files"] = t.benign_files;
    j["benign_functions"] = t.benign_functions;
    j["benign_blocks"] = t.benign_blocks;
    return j;
}

GroundTruth truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    auto read = [&](const char* key, std::set<std::string>& out) {
        if (j.contains(key)) out = j.at(key).get<std::set<std::string>>();
    };
    read("buggy_files", t.buggy_files);
    read("buggy_functions", t.buggy_functions);
    read("buggy_blocks", t.buggy_blocks);
    read("benign_files", t.benign_files);
    read("benign_functions", t.benign_functions);
    read("benign_blocks", t.benign_blocks);
    return t;
}

}  // namespace

std::string manifest_json(const std::vector<SubjectManifest>& manifests) {
    nlohmann::ordered_json root;
    root["subjects"] = nlohmann::ordered_json::array();
    for (const auto& m : manifests) {
        nlohmann::ordered_json j;
        j["name"] = m.name;
        j["title"] = m.title;
        j["input_schema"] = m.input_schema;
        j["source_name"] = m.source_name;
        j["source_text"] = m.source_text;
        j["breakpoints"] = nlohmann::ordered_json::array();
        for (const auto& bp : m.breakpoints) {
            nlohmann::ordered_json b;
            b["id"] = bp.id;
            b["function"] = bp.function;
            b["line"] = bp.line;
            b["watched"] = bp.watched;
            const auto unit = m.breakpoint_units.find(bp.id);
            if (unit != m.breakpoint_units.end()) {
                b["file"] = unit->second.file;
                b["block"] = unit->second.block;
            }
            j["breakpoints"].push_back(std::move(b));
        }
        j["dependency_edges"] = nlohmann::ordered_json::array();
        for (const auto& [a, b] : m.dependency_edges) {
            j["dependency_edges"].push_back({a, b});
        }
        j["ground_truth"] = truth_to_json(m.truth);
        j["ground_truth"]["buggy_breakpoints"] = m.buggy_breakpoints;
        j["ground_truth"]["changed_lines"] = m.changed_lines;
        j["ground_truth"]["change_kind"] = m.change_kind;
        root["subjects"].push_back(std::move(j));
    }
    return root.dump(2) + "\n";
}

std::vector<SubjectManifest> parse_manifest_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest JSON: ") + e.what());
    }
    std::vector<SubjectManifest> out;
    for (const auto& j : root.at("subjects")) {
        SubjectManifest m;
        m.name = j.at("name").get<std::string>();
        m.title = j.value("title", m.name);
        m.input_schema = j.value("input_schema", "");
        m.source_name = j.value("source_name", "");
        m.source_text = j.value("source_text", "");
        for (const auto& b : j.at("breakpoints")) {
            BreakpointDecl bp;
            bp.id = b.at("id").get<std::string>();
            bp.function = b.value("function", "");
            bp.line = b.value("line", 0);
            if (b.contains("watched")) {
                bp.watched = b.at("watched").get<std::vector<std::string>>();
            }
            m.breakpoints.push_back(bp);
            UnitRef unit;
            unit.file = b.value("file", m.source_name);
            unit.function = bp.function;
            unit.block = b.value("block", "");
            m.breakpoint_units[bp.id] = unit;
        }
        if (j.contains("dependency_edges")) {
            for (const auto& e : j.at("dependency_edges")) {
                m.dependency_edges.emplace_back(e.at(0).get<std::string>(),
                                                e.at(1).get<std::string>());
            }
        }
        const auto& gt = j.at("ground_truth");
        m.truth = truth_from_json(gt);
        if (gt.contains("buggy_breakpoints")) {
            m.buggy_breakpoints = gt.at("buggy_breakpoints").get<std::set<std::string>>();
        }
        if (gt.contains("changed_lines")) {
            m.changed_lines = gt.at("changed_lines").get<std::vector<int>>();
        }
        m.change_kind = gt.value("change_kind", "statement");
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<SubjectManifest> load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open manifest '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest_json(buf.str());
}

void write_manifest(const std::string& path,
                    const std::vector<SubjectManifest>& manifests) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write manifest '" + path + "'");
    out << manifest_json(manifests);
}

}  // namespace invdiff
