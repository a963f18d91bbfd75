#include "invdiff/blocks.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "invdiff/errors.hpp"

namespace invdiff {

namespace {

// Blanks comments, string literals and char literals, preserving line
// breaks so every surviving character keeps its line number.
std::string strip_non_code(const std::string& src) {
    std::string out;
    out.reserve(src.size());
    enum State { kCode, kLineComment, kBlockComment, kString, kChar } state = kCode;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const char c = src[i];
        const char next = i + 1 < src.size() ? src[i + 1] : '\0';
        switch (state) {
            case kCode:
                if (c == '/' && next == '/') {
                    state = kLineComment;
                    out += "  ";
                    ++i;
                } else if (c == '/' && next == '*') {
                    state = kBlockComment;
                    out += "  ";
                    ++i;
                } else if (c == '"') {
                    state = kString;
                    out += ' ';
                } else if (c == '\'') {
                    state = kChar;
                    out += ' ';
                } else {
                    out += c;
                }
                break;
            case kLineComment:
                if (c == '\n') {
                    state = kCode;
                    out += '\n';
                } else {
                    out += ' ';
                }
                break;
            case kBlockComment:
                if (c == '*' && next == '/') {
                    state = kCode;
                    out += "  ";
                    ++i;
                } else {
                    out += c == '\n' ? '\n' : ' ';
                }
                break;
            case kString:
            case kChar: {
                const char quote = state == kString ? '"' : '\'';
                if (c == '\\') {
                    out += "  ";
                    ++i;
                    if (next == '\n') out.back() = '\n';
                } else if (c == quote) {
                    state = kCode;
                    out += ' ';
                } else {
                    out += c == '\n' ? '\n' : ' ';
                }
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    lines.push_back(cur);
    return lines;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

BlockTree parse_blocks(const std::string& source, const std::string& path) {
    BlockTree tree;
    tree.source_path = path;
    const std::string stripped = strip_non_code(source);
    tree.stripped_lines = split_lines(stripped);

    std::vector<int> open_stack;  // node indices
    int line = 1;
    int last_code_line = 0;  // line of the most recent non-space character

    for (char c : stripped) {
        if (c == '\n') {
            ++line;
            continue;
        }
        if (c == '{') {
            BlockNode node;
            node.id = "b" + std::to_string(tree.nodes.size());
            node.start_line = line;
            node.construct_line = last_code_line > 0 ? last_code_line : line;
            node.parent = open_stack.empty() ? -1 : open_stack.back();
            node.kind = open_stack.empty() ? BlockKind::kFunctionBody
                                           : BlockKind::kCompound;
            open_stack.push_back(static_cast<int>(tree.nodes.size()));
            tree.nodes.push_back(node);
            last_code_line = line;
            continue;
        }
        if (c == '}') {
            if (open_stack.empty()) {
                throw ParseError("unbalanced '}'", line);
            }
            tree.nodes[open_stack.back()].end_line = line;
            open_stack.pop_back();
            last_code_line = line;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) {
            last_code_line = line;
        }
    }
    if (!open_stack.empty()) {
        throw ParseError("unbalanced '{'", tree.nodes[open_stack.back()].start_line);
    }
    return tree;
}

const BlockNode* enclosing_block_node(const BlockTree& t, int line) {
    const BlockNode* best = nullptr;
    for (const auto& node : t.nodes) {
        if (line < node.start_line || line > node.end_line) continue;
        if (!best || node.start_line > best->start_line ||
            (node.start_line == best->start_line && node.end_line < best->end_line)) {
            best = &node;
        }
    }
    return best;
}

std::string enclosing_block(const BlockTree& t, int line) {
    const BlockNode* node = enclosing_block_node(t, line);
    return node ? node->id : kFileLevelBlock;
}

std::string enclosing_function(const BlockTree& t, int line) {
    const BlockNode* node = enclosing_block_node(t, line);
    while (node && node->kind != BlockKind::kFunctionBody) {
        node = node->parent >= 0 ? &t.nodes[node->parent] : nullptr;
    }
    if (!node) return "";
    // Identifier immediately before the parameter list on the construct line.
    if (node->construct_line < 1 ||
        node->construct_line > static_cast<int>(t.stripped_lines.size())) {
        return "";
    }
    const std::string& text = t.stripped_lines[node->construct_line - 1];
    const std::size_t paren = text.find('(');
    if (paren == std::string::npos) return "";
    std::size_t e = paren;
    while (e > 0 && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    std::size_t b = e;
    while (b > 0 && (std::isalnum(static_cast<unsigned char>(text[b - 1])) ||
                     text[b - 1] == '_')) {
        --b;
    }
    return text.substr(b, e - b);
}

namespace {

// True when the block body consists of exactly one return statement.
bool return_only_block(const BlockTree& t, const BlockNode& node) {
    std::string body;
    for (int line = node.start_line; line <= node.end_line; ++line) {
        if (line < 1 || line > static_cast<int>(t.stripped_lines.size())) continue;
        std::string text = t.stripped_lines[line - 1];
        if (line == node.start_line) {
            const std::size_t brace = text.find('{');
            if (brace != std::string::npos) text = text.substr(brace + 1);
        }
        if (line == node.end_line) {
            const std::size_t brace = text.rfind('}');
            if (brace != std::string::npos) text = text.substr(0, brace);
        }
        body += text;
        body += ' ';
    }
    const std::string t_body = trim(body);
    if (t_body.rfind("return", 0) != 0) return false;
    const std::size_t semi = t_body.find(';');
    return semi != std::string::npos && trim(t_body.substr(semi + 1)).empty();
}

}  // namespace

std::vector<Placement> place_breakpoints(const BlockTree& t,
                                         const std::vector<LineAnnotation>& changes) {
    if (changes.empty()) {
        throw UsageError("place_breakpoints: empty change set");
    }

    std::vector<LineAnnotation> statements, blocks;
    for (const auto& ann : changes) {
        if (ann.kind == AnnotationKind::kChangedStatement) statements.push_back(ann);
        if (ann.kind == AnnotationKind::kChangedBlock) blocks.push_back(ann);
    }

    std::vector<Placement> out;
    std::set<std::string> placed_blocks;

    // Rule 1: statement-level change -> last line of its enclosing block.
    if (!statements.empty() && blocks.empty()) {
        for (const auto& ann : statements) {
            const BlockNode* node = enclosing_block_node(t, ann.line);
            if (!node) {
                throw UsageError("changed line " + std::to_string(ann.line) +
                                 " is outside every block");
            }
            if (!placed_blocks.insert(node->id).second) continue;
            out.push_back({node->end_line, 1, node->id});
        }
    } else {
        if (blocks.empty()) {
            throw UsageError("change set has no statement or block annotations");
        }
        // Rules 2/3: the change covers a block; use the innermost block
        // containing every block-change line.
        const BlockNode* covered = nullptr;
        for (const auto& ann : blocks) {
            const BlockNode* node = enclosing_block_node(t, ann.line);
            if (!node) {
                throw UsageError("changed line " + std::to_string(ann.line) +
                                 " is outside every block");
            }
            if (!covered) {
                covered = node;
                continue;
            }
            // Walk outward until the candidate spans both.
            while (covered &&
                   (ann.line < covered->start_line || ann.line > covered->end_line)) {
                covered = covered->parent >= 0 ? &t.nodes[covered->parent] : nullptr;
            }
            if (!covered) {
                throw UsageError("changed block lines do not share a block");
            }
        }
        if (return_only_block(t, *covered)) {
            out.push_back({covered->construct_line, 3, covered->id});
        } else {
            out.push_back({covered->end_line, 2, covered->id});
        }
        // Statement-level lines outside the covered block still get their
        // own rule-1 placement.
        for (const auto& ann : statements) {
            if (ann.line >= covered->start_line && ann.line <= covered->end_line) {
                continue;
            }
            const BlockNode* node = enclosing_block_node(t, ann.line);
            if (node && placed_blocks.insert(node->id).second &&
                node->id != covered->id) {
                out.push_back({node->end_line, 1, node->id});
            }
        }
    }

    std::sort(out.begin(), out.end(),
              [](const Placement& a, const Placement& b) { return a.line < b.line; });
    return out;
}

Placement place_breakpoint(const BlockTree& t,
                           const std::vector<LineAnnotation>& changes) {
    return place_breakpoints(t, changes).front();
}

}  // namespace invdiff
