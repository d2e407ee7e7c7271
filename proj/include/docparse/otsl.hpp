#pragma once

#include <string>
#include <vector>

namespace docparse {

// Table-structure tokens: fcel (new cell with content), ecel (new empty
// cell), lcel (extends the cell to its left), ucel (extends the cell
// above), xcel (extends both), nl (row terminator).
enum class OtslKind { FCel, ECel, LCel, UCel, XCel, Nl };

struct OtslToken {
    OtslKind kind = OtslKind::ECel;
    std::string content;  // used by fcel only

    bool operator==(const OtslToken&) const = default;
};

struct OtslSequence {
    std::vector<OtslToken> tokens;

    bool operator==(const OtslSequence&) const = default;
};

struct OtslViolation {
    size_t index = 0;  // offending token index (or token count for global rules)
    std::string message;
};

struct GridCell {
    int row = 0, col = 0;
    int rowspan = 1, colspan = 1;
    std::string content;
    bool header = false;

    bool operator==(const GridCell&) const = default;
};

/// Rectangular table with merged cells tiling the grid exactly once.
struct TableGrid {
    int rows = 0, cols = 0;
    std::vector<GridCell> cells;  // sorted by (row, col)

    bool operator==(const TableGrid&) const = default;
};

/// Every grammar violation with its token index; empty result means valid.
/// The empty sequence is a valid zero-row table.
std::vector<OtslViolation> validate(const OtslSequence& seq);

/// Resolve merges into rowspan/colspan. Throws InvalidOtsl when the
/// sequence fails validation.
TableGrid otsl_to_grid(const OtslSequence& seq);

/// Inverse of otsl_to_grid; valid by construction. Header flags are not
/// representable in OTSL and are dropped.
OtslSequence grid_to_otsl(const TableGrid& grid);

/// Deterministic byte-exact HTML table markup with escaped cell content.
std::string grid_to_html(const TableGrid& grid);

/// Parse the table/thead/tbody/tr/td/th subset with rowspan/colspan.
/// Throws UnsupportedMarkup on nested tables, unknown tags, or a grid
/// that does not tile.
TableGrid html_to_grid(const std::string& html);

/// Text form: whitespace-separated lowercase tokens; in interleaved mode
/// fcel content follows in double quotes. Throws ParseFailure.
OtslSequence parse_otsl(const std::string& text, bool interleaved = true);
std::string serialize_otsl(const OtslSequence& seq, bool interleaved = true);

}  // namespace docparse
