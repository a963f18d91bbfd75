#pragma once

#include <string>
#include <vector>

namespace invdiff {

enum class BlockKind { kFunctionBody, kCompound };

// One brace-delimited region. The span runs from the opening-brace line to
// the closing-brace line; construct_line is the line carrying the opening
// construct (the `if (...)`, `for (...)`, or function signature), which may
// precede the brace.
struct BlockNode {
    std::string id;           // "b0", "b1", ... in opening order
    int start_line = 0;       // 1-based
    int end_line = 0;
    int construct_line = 0;
    int parent = -1;          // index into nodes, -1 for top level
    BlockKind kind = BlockKind::kCompound;
};

struct BlockTree {
    std::string source_path;
    std::vector<BlockNode> nodes;
    // Source lines with comments, string literals and character literals
    // blanked out; used for return-only detection and function names.
    std::vector<std::string> stripped_lines;
};

// Sentinel returned when a line is outside every block.
inline const std::string kFileLevelBlock = "file";

// Structural brace parser. Comments, string literals and character
// literals are stripped before matching; an unbalanced brace raises
// ParseError with its line number. Top-level brace regions are classified
// as function bodies, nested ones as compounds.
BlockTree parse_blocks(const std::string& source, const std::string& path = "");

// Innermost block whose span contains the line, or kFileLevelBlock.
std::string enclosing_block(const BlockTree& t, int line);
const BlockNode* enclosing_block_node(const BlockTree& t, int line);

// Name of the function whose body contains the line (empty if none).
std::string enclosing_function(const BlockTree& t, int line);

enum class AnnotationKind { kChangedStatement, kChangedBlock, kWarning };

struct LineAnnotation {
    int line = 0;
    AnnotationKind kind = AnnotationKind::kChangedStatement;
    std::string tool;  // for warnings
};

struct Placement {
    int line = 0;
    int rule = 0;           // 1, 2 or 3
    std::string block_id;   // block the breakpoint observes
};

// Breakpoint placement rules, applied in order, first match wins:
//   1. statement-level change          -> last line of its enclosing block
//   2. change covering a block         -> last line of the inner block
//   3. changed block that only returns -> the block's construct line
// Changes spanning several blocks yield one placement per affected block
// (ordered by line); place_breakpoint returns the first.
std::vector<Placement> place_breakpoints(const BlockTree& t,
                                         const std::vector<LineAnnotation>& changes);
Placement place_breakpoint(const BlockTree& t,
                           const std::vector<LineAnnotation>& changes);

}  // namespace invdiff
