#include "docparse/otsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>

#include "docparse/errors.hpp"

namespace docparse {

namespace {

struct SlotLayout {
    // Row-major token indices per slot, rows of equal width.
    std::vector<std::vector<size_t>> rows;
    bool shape_ok = false;
};

SlotLayout slot_layout(const OtslSequence& seq, std::vector<OtslViolation>* out) {
    SlotLayout layout;
    std::vector<size_t> current;
    bool terminated = true;
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
        if (seq.tokens[i].kind == OtslKind::Nl) {
            if (current.empty() && out)
                out->push_back({i, "empty row at index " + std::to_string(i)});
            layout.rows.push_back(current);
            current.clear();
            terminated = true;
        } else {
            current.push_back(i);
            terminated = false;
        }
    }
    if (!terminated) {
        if (out)
            out->push_back({seq.tokens.size(),
                            "last row not terminated by nl"});
        layout.rows.push_back(current);
    }
    layout.shape_ok = true;
    for (const auto& row : layout.rows) {
        if (row.empty()) layout.shape_ok = false;
        if (!layout.rows.empty() && row.size() != layout.rows.front().size()) {
            layout.shape_ok = false;
            if (out && !row.empty())
                out->push_back({row.front(), "ragged row at index " + std::to_string(row.front())});
        }
    }
    return layout;
}

}  // namespace

std::vector<OtslViolation> validate(const OtslSequence& seq) {
    std::vector<OtslViolation> v;
    SlotLayout layout = slot_layout(seq, &v);

    for (size_t r = 0; r < layout.rows.size(); ++r) {
        for (size_t c = 0; c < layout.rows[r].size(); ++c) {
            size_t idx = layout.rows[r][c];
            OtslKind k = seq.tokens[idx].kind;
            if (k == OtslKind::LCel && c == 0)
                v.push_back({idx, "lcel first in row at index " + std::to_string(idx)});
            if ((k == OtslKind::UCel || k == OtslKind::XCel) && r == 0)
                v.push_back({idx, (k == OtslKind::UCel ? std::string("ucel") : std::string("xcel")) +
                                      " in first row at index " + std::to_string(idx)});
            if (k == OtslKind::XCel && c == 0)
                v.push_back({idx, "xcel first in row at index " + std::to_string(idx)});
        }
    }
    if (!layout.shape_ok || !v.empty()) return v;

    // Owner assignment, then rectangularity of every merged cell.
    const size_t nrows = layout.rows.size();
    const size_t ncols = nrows ? layout.rows[0].size() : 0;
    std::vector<std::vector<int>> owner(nrows, std::vector<int>(ncols, -1));
    int next_id = 0;
    for (size_t r = 0; r < nrows; ++r) {
        for (size_t c = 0; c < ncols; ++c) {
            size_t idx = layout.rows[r][c];
            switch (seq.tokens[idx].kind) {
                case OtslKind::FCel:
                case OtslKind::ECel:
                    owner[r][c] = next_id++;
                    break;
                case OtslKind::LCel:
                    owner[r][c] = owner[r][c - 1];
                    break;
                case OtslKind::UCel:
                    owner[r][c] = owner[r - 1][c];
                    break;
                case OtslKind::XCel:
                    if (owner[r][c - 1] != owner[r - 1][c]) {
                        v.push_back({idx, "xcel neighbors belong to different cells at index " +
                                              std::to_string(idx)});
                        owner[r][c] = owner[r - 1][c];
                    } else {
                        owner[r][c] = owner[r - 1][c];
                    }
                    break;
                case OtslKind::Nl:
                    break;
            }
        }
    }
    if (!v.empty()) return v;

    struct Extent {
        size_t r0, c0, r1, c1, count;
        size_t first_idx;
    };
    std::map<int, Extent> extents;
    for (size_t r = 0; r < nrows; ++r) {
        for (size_t c = 0; c < ncols; ++c) {
            int id = owner[r][c];
            auto it = extents.find(id);
            if (it == extents.end()) {
                extents[id] = {r, c, r, c, 1, layout.rows[r][c]};
            } else {
                it->second.r1 = std::max(it->second.r1, r);
                it->second.c1 = std::max(it->second.c1, c);
                it->second.r0 = std::min(it->second.r0, r);
                it->second.c0 = std::min(it->second.c0, c);
                it->second.count++;
            }
        }
    }
    for (const auto& [id, e] : extents) {
        size_t span = (e.r1 - e.r0 + 1) * (e.c1 - e.c0 + 1);
        if (span != e.count)
            v.push_back({e.first_idx,
                         "non-rectangular merge for cell at index " + std::to_string(e.first_idx)});
    }
    std::sort(v.begin(), v.end(), [](const OtslViolation& a, const OtslViolation& b) {
        return a.index < b.index;
    });
    return v;
}

TableGrid otsl_to_grid(const OtslSequence& seq) {
    auto violations = validate(seq);
    if (!violations.empty())
        throw InvalidOtsl("otsl_to_grid: " + violations.front().message);

    SlotLayout layout = slot_layout(seq, nullptr);
    const size_t nrows = layout.rows.size();
    const size_t ncols = nrows ? layout.rows[0].size() : 0;

    TableGrid grid;
    grid.rows = static_cast<int>(nrows);
    grid.cols = static_cast<int>(ncols);

    std::vector<std::vector<int>> owner(nrows, std::vector<int>(ncols, -1));
    std::map<int, GridCell> cells;
    int next_id = 0;
    for (size_t r = 0; r < nrows; ++r) {
        for (size_t c = 0; c < ncols; ++c) {
            size_t idx = layout.rows[r][c];
            const OtslToken& tok = seq.tokens[idx];
            switch (tok.kind) {
                case OtslKind::FCel:
                case OtslKind::ECel: {
                    owner[r][c] = next_id;
                    GridCell cell;
                    cell.row = static_cast<int>(r);
                    cell.col = static_cast<int>(c);
                    cell.content = tok.kind == OtslKind::FCel ? tok.content : "";
                    cells[next_id] = cell;
                    next_id++;
                    break;
                }
                case OtslKind::LCel:
                    owner[r][c] = owner[r][c - 1];
                    break;
                case OtslKind::UCel:
                case OtslKind::XCel:
                    owner[r][c] = owner[r - 1][c];
                    break;
                case OtslKind::Nl:
                    break;
            }
            if (owner[r][c] >= 0) {
                GridCell& cell = cells[owner[r][c]];
                cell.rowspan = std::max(cell.rowspan, static_cast<int>(r) - cell.row + 1);
                cell.colspan = std::max(cell.colspan, static_cast<int>(c) - cell.col + 1);
            }
        }
    }
    for (auto& [id, cell] : cells) grid.cells.push_back(cell);
    std::sort(grid.cells.begin(), grid.cells.end(), [](const GridCell& a, const GridCell& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return grid;
}

OtslSequence grid_to_otsl(const TableGrid& grid) {
    OtslSequence seq;
    if (grid.rows == 0 || grid.cols == 0) return seq;
    std::vector<std::vector<const GridCell*>> owner(
        grid.rows, std::vector<const GridCell*>(grid.cols, nullptr));
    for (const auto& cell : grid.cells)
        for (int r = cell.row; r < cell.row + cell.rowspan; ++r)
            for (int c = cell.col; c < cell.col + cell.colspan; ++c) owner[r][c] = &cell;

    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const GridCell* cell = owner[r][c];
            if (cell == nullptr)
                throw InvalidOtsl("grid_to_otsl: uncovered slot (" + std::to_string(r) + "," +
                                  std::to_string(c) + ")");
            OtslToken tok;
            if (r == cell->row && c == cell->col) {
                tok.kind = cell->content.empty() ? OtslKind::ECel : OtslKind::FCel;
                tok.content = cell->content;
            } else if (r == cell->row) {
                tok.kind = OtslKind::LCel;
            } else if (c == cell->col) {
                tok.kind = OtslKind::UCel;
            } else {
                tok.kind = OtslKind::XCel;
            }
            seq.tokens.push_back(tok);
        }
        seq.tokens.push_back({OtslKind::Nl, ""});
    }
    return seq;
}

namespace {

std::string escape_html(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape_html(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (s[i] == '&') {
            auto starts = [&](const char* e) { return s.compare(i, strlen(e), e) == 0; };
            if (starts("&amp;")) { out.push_back('&'); i += 5; continue; }
            if (starts("&lt;")) { out.push_back('<'); i += 4; continue; }
            if (starts("&gt;")) { out.push_back('>'); i += 4; continue; }
            if (starts("&quot;")) { out.push_back('"'); i += 6; continue; }
            if (starts("&#39;")) { out.push_back('\''); i += 5; continue; }
        }
        out.push_back(s[i++]);
    }
    return out;
}

}  // namespace

std::string grid_to_html(const TableGrid& grid) {
    std::string out = "<table>";
    std::vector<std::vector<const GridCell*>> by_row(grid.rows);
    for (const auto& cell : grid.cells) by_row[cell.row].push_back(&cell);
    for (int r = 0; r < grid.rows; ++r) {
        out += "<tr>";
        std::vector<const GridCell*> row = by_row[r];
        std::sort(row.begin(), row.end(),
                  [](const GridCell* a, const GridCell* b) { return a->col < b->col; });
        for (const GridCell* cell : row) {
            const char* tag = cell->header ? "th" : "td";
            out += "<";
            out += tag;
            if (cell->colspan > 1) out += " colspan=\"" + std::to_string(cell->colspan) + "\"";
            if (cell->rowspan > 1) out += " rowspan=\"" + std::to_string(cell->rowspan) + "\"";
            out += ">";
            out += escape_html(cell->content);
            out += "</";
            out += tag;
            out += ">";
        }
        out += "</tr>";
    }
    out += "</table>";
    return out;
}

namespace {

struct HtmlTag {
    std::string name;
    bool closing = false;
    std::string raw;  // full tag text for attribute parsing
};

class HtmlScanner {
  public:
    explicit HtmlScanner(const std::string& s) : s_(s) {}

    // Returns false at end of input. Non-whitespace text between structural
    // tags is rejected by the caller via pending_text().
    bool next_tag(HtmlTag* tag) {
        skip_text();
        if (pos_ >= s_.size()) return false;
        if (s_[pos_] != '<') throw UnsupportedMarkup("html_to_grid: stray text outside cells");
        size_t end = s_.find('>', pos_);
        if (end == std::string::npos) throw UnsupportedMarkup("html_to_grid: unterminated tag");
        std::string raw = s_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        tag->raw = raw;
        tag->closing = !raw.empty() && raw[0] == '/';
        size_t start = tag->closing ? 1 : 0;
        size_t name_end = start;
        while (name_end < raw.size() && std::isalnum(static_cast<unsigned char>(raw[name_end])))
            name_end++;
        tag->name = raw.substr(start, name_end - start);
        std::transform(tag->name.begin(), tag->name.end(), tag->name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return true;
    }

    // Raw text up to the next '<'; consumed.
    std::string take_text() {
        size_t lt = s_.find('<', pos_);
        if (lt == std::string::npos) lt = s_.size();
        std::string t = s_.substr(pos_, lt - pos_);
        pos_ = lt;
        return t;
    }

    bool pending_nonspace_text() {
        size_t p = pos_;
        while (p < s_.size() && s_[p] != '<')
            if (!std::isspace(static_cast<unsigned char>(s_[p++]))) return true;
        return false;
    }

  private:
    void skip_text() {
        if (pending_nonspace_text())
            throw UnsupportedMarkup("html_to_grid: text outside a table cell");
        while (pos_ < s_.size() && s_[pos_] != '<') pos_++;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

int span_attr(const std::string& raw, const std::string& name) {
    size_t p = raw.find(name);
    if (p == std::string::npos) return 1;
    p = raw.find('=', p + name.size());
    if (p == std::string::npos) return 1;
    p++;
    while (p < raw.size() && (raw[p] == ' ' || raw[p] == '"' || raw[p] == '\'')) p++;
    int v = 0;
    while (p < raw.size() && std::isdigit(static_cast<unsigned char>(raw[p])))
        v = v * 10 + (raw[p++] - '0');
    return v >= 1 ? v : 1;
}

}  // namespace

TableGrid html_to_grid(const std::string& html) {
    HtmlScanner scan(html);
    HtmlTag tag;
    if (!scan.next_tag(&tag) || tag.name != "table" || tag.closing)
        throw UnsupportedMarkup("html_to_grid: expected <table>");

    TableGrid grid;
    std::vector<std::vector<bool>> occupied;
    int row = -1;
    bool done = false;
    auto ensure_rows = [&](int r) {
        while (static_cast<int>(occupied.size()) <= r) occupied.emplace_back();
    };
    auto slot_taken = [&](int r, int c) {
        return r < static_cast<int>(occupied.size()) &&
               c < static_cast<int>(occupied[r].size()) && occupied[r][c];
    };
    auto mark = [&](int r, int c) {
        ensure_rows(r);
        if (static_cast<int>(occupied[r].size()) <= c) occupied[r].resize(c + 1, false);
        occupied[r][c] = true;
    };

    while (scan.next_tag(&tag)) {
        if (done) throw UnsupportedMarkup("html_to_grid: content after </table>");
        if (tag.name == "thead" || tag.name == "tbody") continue;  // flattened
        if (tag.name == "table" && tag.closing) { done = true; continue; }
        if (tag.name == "tr" && !tag.closing) { row++; ensure_rows(row); continue; }
        if (tag.name == "tr" && tag.closing) continue;
        if ((tag.name == "td" || tag.name == "th") && !tag.closing) {
            if (row < 0) throw UnsupportedMarkup("html_to_grid: cell outside a row");
            GridCell cell;
            cell.header = tag.name == "th";
            cell.colspan = span_attr(tag.raw, "colspan");
            cell.rowspan = span_attr(tag.raw, "rowspan");
            cell.row = row;
            int c = 0;
            while (slot_taken(row, c)) c++;
            cell.col = c;
            std::string content = scan.take_text();
            HtmlTag close;
            if (!scan.next_tag(&close))
                throw UnsupportedMarkup("html_to_grid: unterminated cell");
            if (!close.closing) {
                if (close.name == "table")
                    throw UnsupportedMarkup("html_to_grid: nested table");
                throw UnsupportedMarkup("html_to_grid: markup inside cell: <" + close.name + ">");
            }
            if (close.name != tag.name)
                throw UnsupportedMarkup("html_to_grid: mismatched </" + close.name + ">");
            cell.content = unescape_html(content);
            for (int r = cell.row; r < cell.row + cell.rowspan; ++r)
                for (int cc = cell.col; cc < cell.col + cell.colspan; ++cc) {
                    if (slot_taken(r, cc))
                        throw UnsupportedMarkup("html_to_grid: overlapping cells");
                    mark(r, cc);
                }
            grid.cells.push_back(cell);
            continue;
        }
        throw UnsupportedMarkup("html_to_grid: unsupported tag <" + tag.raw + ">");
    }
    if (!done) throw UnsupportedMarkup("html_to_grid: missing </table>");

    grid.rows = row < 0 ? 0 : row + 1;
    for (const auto& r : occupied) grid.cols = std::max(grid.cols, static_cast<int>(r.size()));
    if (static_cast<int>(occupied.size()) > grid.rows)
        throw UnsupportedMarkup("html_to_grid: rowspan extends past the last row");
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            if (!slot_taken(r, c)) throw UnsupportedMarkup("html_to_grid: grid does not tile");
    std::sort(grid.cells.begin(), grid.cells.end(), [](const GridCell& a, const GridCell& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return grid;
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '"') out += "\\\"";
        else if (c == '\n') out += "\\n";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace

std::string serialize_otsl(const OtslSequence& seq, bool interleaved) {
    std::string out;
    for (const auto& tok : seq.tokens) {
        if (!out.empty()) out.push_back(' ');
        switch (tok.kind) {
            case OtslKind::FCel:
                out += "fcel";
                if (interleaved) {
                    out.push_back(' ');
                    out += quote(tok.content);
                }
                break;
            case OtslKind::ECel: out += "ecel"; break;
            case OtslKind::LCel: out += "lcel"; break;
            case OtslKind::UCel: out += "ucel"; break;
            case OtslKind::XCel: out += "xcel"; break;
            case OtslKind::Nl: out += "nl"; break;
        }
    }
    return out;
}

OtslSequence parse_otsl(const std::string& text, bool interleaved) {
    OtslSequence seq;
    size_t i = 0;
    const size_t n = text.size();
    auto skip_ws = [&] { while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) i++; };
    while (true) {
        skip_ws();
        if (i >= n) break;
        size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '"') i++;
        std::string word = text.substr(start, i - start);
        OtslToken tok;
        if (word == "fcel") {
            tok.kind = OtslKind::FCel;
            if (interleaved) {
                skip_ws();
                if (i >= n || text[i] != '"')
                    throw ParseFailure("otsl: fcel without quoted content at offset " +
                                       std::to_string(start));
                i++;
                std::string content;
                while (i < n && text[i] != '"') {
                    if (text[i] == '\\' && i + 1 < n) {
                        char e = text[i + 1];
                        content.push_back(e == 'n' ? '\n' : e);
                        i += 2;
                    } else {
                        content.push_back(text[i++]);
                    }
                }
                if (i >= n) throw ParseFailure("otsl: unterminated quoted content");
                i++;
                tok.content = content;
            }
        } else if (word == "ecel") tok.kind = OtslKind::ECel;
        else if (word == "lcel") tok.kind = OtslKind::LCel;
        else if (word == "ucel") tok.kind = OtslKind::UCel;
        else if (word == "xcel") tok.kind = OtslKind::XCel;
        else if (word == "nl") tok.kind = OtslKind::Nl;
        else throw ParseFailure("otsl: unknown token '" + word + "' at offset " +
                                std::to_string(start));
        seq.tokens.push_back(tok);
    }
    return seq;
}

}  // namespace docparse
