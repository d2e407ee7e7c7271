#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "docparse/errors.hpp"
#include "docparse/otsl.hpp"
#include "oracles.hpp"

using namespace docparse;

namespace {

OtslSequence seq(std::initializer_list<OtslToken> toks) { return {std::vector<OtslToken>(toks)}; }

const OtslToken kNl{OtslKind::Nl, ""};
const OtslToken kEcel{OtslKind::ECel, ""};

OtslToken fcel(const std::string& content) { return {OtslKind::FCel, content}; }

}  // namespace

TEST_CASE("validate basics") {
    CHECK(validate({}).empty());
    CHECK(validate(seq({fcel("a"), fcel("b"), kNl, fcel("c"), fcel("d"), kNl})).empty());

    auto v = validate(seq({{OtslKind::UCel, ""}, kNl}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].index == 0);
    CHECK(v[0].message.find("ucel in first row") != std::string::npos);

    v = validate(seq({fcel("a"), kNl, fcel("b"), fcel("c"), kNl}));
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].message.find("ragged row") != std::string::npos);

    v = validate(seq({{OtslKind::LCel, ""}, fcel("a"), kNl}));
    REQUIRE(v.size() == 1);
    CHECK(v[0].message.find("lcel first in row") != std::string::npos);

    // xcel whose left and up neighbors belong to different cells.
    v = validate(seq({fcel("a"), fcel("b"), kNl, fcel("c"), {OtslKind::XCel, ""}, kNl}));
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].message.find("xcel") != std::string::npos);

    // Unterminated last row.
    v = validate(seq({fcel("a")}));
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].message.find("not terminated") != std::string::npos);

    // Non-rectangular merge: L-shape via ucel under a colspan-2 cell.
    v = validate(seq({fcel("a"), {OtslKind::LCel, ""}, kNl, {OtslKind::UCel, ""}, fcel("b"), kNl}));
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].message.find("non-rectangular") != std::string::npos);
}

TEST_CASE("otsl_to_grid hand-tiled examples") {
    // colspan: [fcel"a", lcel, nl, fcel"b", fcel"c", nl]
    auto g = otsl_to_grid(seq({fcel("a"), {OtslKind::LCel, ""}, kNl, fcel("b"), fcel("c"), kNl}));
    CHECK(g.rows == 2);
    CHECK(g.cols == 2);
    REQUIRE(g.cells.size() == 3);
    CHECK(g.cells[0] == GridCell{0, 0, 1, 2, "a", false});
    CHECK(g.cells[1] == GridCell{1, 0, 1, 1, "b", false});
    CHECK(g.cells[2] == GridCell{1, 1, 1, 1, "c", false});

    // rowspan: [fcel"a", fcel"b", nl, ucel, fcel"c", nl]
    g = otsl_to_grid(seq({fcel("a"), fcel("b"), kNl, {OtslKind::UCel, ""}, fcel("c"), kNl}));
    REQUIRE(g.cells.size() == 3);
    CHECK(g.cells[0] == GridCell{0, 0, 2, 1, "a", false});

    // Empty sequence: 0x0 grid.
    g = otsl_to_grid({});
    CHECK(g.rows == 0);
    CHECK(g.cols == 0);
    CHECK(g.cells.empty());

    CHECK_THROWS_AS(otsl_to_grid(seq({{OtslKind::UCel, ""}, kNl})), InvalidOtsl);
}

TEST_CASE("grid_to_html pinned output") {
    TableGrid g;
    g.rows = 1;
    g.cols = 1;
    g.cells = {{0, 0, 1, 1, "x", false}};
    CHECK(grid_to_html(g) == "<table><tr><td>x</td></tr></table>");

    g.cells[0].content = "a<b";
    CHECK(grid_to_html(g) == "<table><tr><td>a&lt;b</td></tr></table>");

    TableGrid span;
    span.rows = 1;
    span.cols = 2;
    span.cells = {{0, 0, 1, 2, "wide", false}};
    CHECK(grid_to_html(span).find("colspan=\"2\"") != std::string::npos);

    TableGrid hdr;
    hdr.rows = 1;
    hdr.cols = 1;
    hdr.cells = {{0, 0, 1, 1, "h", true}};
    CHECK(grid_to_html(hdr) == "<table><tr><th>h</th></tr></table>");
}

TEST_CASE("html_to_grid") {
    auto g = html_to_grid("<table><tr><td>x</td></tr></table>");
    CHECK(g.rows == 1);
    CHECK(g.cells[0].content == "x");

    // thead/tbody flattened, entities unescaped, spans parsed.
    g = html_to_grid("<table><thead><tr><th>h&amp;1</th><th>h2</th></tr></thead>"
                     "<tbody><tr><td colspan=\"2\">b</td></tr></tbody></table>");
    CHECK(g.rows == 2);
    CHECK(g.cols == 2);
    CHECK(g.cells[0].content == "h&1");
    CHECK(g.cells[0].header);
    CHECK(g.cells[2].colspan == 2);

    // Inverse of the otsl rowspan example.
    g = html_to_grid("<table><tr><td rowspan=\"2\">a</td><td>b</td></tr>"
                     "<tr><td>c</td></tr></table>");
    CHECK(g.cells[0].rowspan == 2);

    CHECK_THROWS_AS(html_to_grid("<table><tr><td><table></table></td></tr></table>"),
                    UnsupportedMarkup);
    CHECK_THROWS_AS(html_to_grid("<table><tr><div>x</div></tr></table>"), UnsupportedMarkup);
    CHECK_THROWS_AS(html_to_grid("<table><tr><td>a</td></tr><tr><td>b</td><td>c</td></tr></table>"),
                    UnsupportedMarkup);  // does not tile
    CHECK_THROWS_AS(html_to_grid("<table><tr><td rowspan=\"3\">a</td></tr></table>"),
                    UnsupportedMarkup);
}

TEST_CASE("round-trips on random grids") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        TableGrid g = oracles::random_grid(rng);
        auto otsl = grid_to_otsl(g);
        CHECK(validate(otsl).empty());
        CHECK(otsl_to_grid(otsl) == g);
        CHECK(html_to_grid(grid_to_html(g)) == g);

        // Text round-trip through the interleaved serialization.
        // grid_to_otsl drops empty fcel content down to ecel, so compare via
        // the grid, which is the canonical form.
        auto text = serialize_otsl(otsl, true);
        CHECK(otsl_to_grid(parse_otsl(text, true)) == g);
        // Structure-only mode keeps the shape.
        auto structural = parse_otsl(serialize_otsl(otsl, false), false);
        auto gs = otsl_to_grid(structural);
        CHECK(gs.rows == g.rows);
        CHECK(gs.cols == g.cols);
        CHECK(gs.cells.size() == g.cells.size());
    }
}

TEST_CASE("parse_otsl text form") {
    auto s = parse_otsl("fcel \"a b\" ecel nl fcel \"q\\\"x\\n\" lcel nl", true);
    REQUIRE(s.tokens.size() == 6);
    CHECK(s.tokens[0].content == "a b");
    CHECK(s.tokens[3].content == "q\"x\n");
    CHECK(serialize_otsl(s, true) ==
          "fcel \"a b\" ecel nl fcel \"q\\\"x\\n\" lcel nl");

    CHECK_THROWS_AS(parse_otsl("fcel nocontent nl", true), ParseFailure);
    CHECK_THROWS_AS(parse_otsl("fcel \"unterminated", true), ParseFailure);
    CHECK_THROWS_AS(parse_otsl("bogus nl", true), ParseFailure);
    // Structure-only mode takes bare fcel.
    CHECK(parse_otsl("fcel ecel nl", false).tokens.size() == 3);
}
