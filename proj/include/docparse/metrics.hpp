#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docparse/doc_model.hpp"
#include "docparse/reading_order.hpp"

namespace docparse {

/// Ordered labeled tree node used by the tree edit distance. Tables map to
/// label "table" at the root, "tr" rows, and "td" cells carrying spans and
/// text; other label sets are fine for generic use.
struct TedNode {
    std::string label;
    int colspan = 1, rowspan = 1;
    std::string text;
    std::vector<TedNode> children;
};

size_t tree_size(const TedNode& t);

struct TedCosts {
    std::function<double(const TedNode&)> del = [](const TedNode&) { return 1.0; };
    std::function<double(const TedNode&)> ins = [](const TedNode&) { return 1.0; };
    std::function<double(const TedNode&, const TedNode&)> sub;
};

/// Zhang-Shasha ordered tree edit distance. Null pointers denote the empty
/// tree. Default substitution cost: 0 when labels match, else 1.
double tree_edit_distance(const TedNode* t1, const TedNode* t2, const TedCosts& costs = {});

/// Build a TEDS tree from the supported HTML table subset (thead/tbody are
/// flattened, th folds into td with a header flag on the text comparison
/// disabled). Throws ParseFailure on unsupported markup.
TedNode table_tree_from_html(const std::string& html);

enum class CellCost { Graded, Exact };

struct TedsOptions {
    CellCost cell_cost = CellCost::Graded;
};

/// 1 - TED/max(|pred|, |gt|). structure_only ignores cell text.
double teds(const std::string& pred_html, const std::string& gt_html, bool structure_only,
            const TedsOptions& opts = {});

/// Levenshtein over Unicode scalar values divided by max length; 0 when
/// both strings are empty.
double norm_edit_distance(const std::string& a, const std::string& b);

size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);

/// Normalized edit distance between the matched gt-id sequence in predicted
/// order (unmatched predictions dropped) and the gt order.
double reading_order_edit(const ReadingOrder& pred, const ReadingOrder& gt,
                          const std::map<int, int>& matching);

/// Markdown pipe table; separator rows are dropped on parse and re-emitted
/// canonically (single spaces around pipes, `---` separator after the
/// header).
struct PipeTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

PipeTable parse_pipe_table(const std::string& s);  // throws ParseFailure
std::string canonical_pipe_table(const PipeTable& t);

/// Chart-extraction score over (row key, column key, value) entries with
/// relative numeric error; greedy one-to-one matching by similarity.
/// Throws ParseFailure when either input is not a pipe table.
double rms_f1(const std::string& pred_table, const std::string& gt_table);

/// BLEU with uniform 1..4-gram weights and brevity penalty; n-gram orders
/// are capped by the shorter token sequence and zero counts are add-one
/// smoothed. LaTeX commands tokenize as single tokens, every other
/// non-whitespace character stands alone.
double bleu4(const std::string& pred, const std::string& gt);

std::vector<std::string> latex_tokens(const std::string& s);

/// Greedy one-to-one matching of predictions to ground truth by descending
/// IoU among same-category pairs at or above iou_min. Returns pred index ->
/// gt index.
std::map<int, int> match_regions(const std::vector<Region>& pred, const std::vector<Region>& gt,
                                 double iou_min);

struct PageMetrics {
    std::string page_id;
    std::optional<double> text_edit;
    std::optional<double> formula_bleu;
    std::optional<double> table_teds;
    std::optional<double> table_teds_s;
    std::optional<double> chart_rms_f1;
    std::optional<double> order_edit;
    bool missing_gt = false;
};

struct EvalReport {
    std::optional<double> text_edit;
    std::optional<double> formula;
    std::optional<double> table_teds;
    std::optional<double> table_teds_s;
    std::optional<double> chart_rms_f1;
    std::optional<double> order_edit;
    std::optional<double> overall;  // 0..100
    int pages = 0;
    int pages_skipped = 0;

    std::string to_json() const;      // canonical (sorted keys, LF)
    std::string to_markdown() const;  // Overall / Text-Edit / Formula / ... columns
};

struct OverallWeights {
    double text = 1.0, formula = 1.0, table = 1.0;
};

/// Per-metric sample means over pages; Overall is the weighted mean of
/// (1 - TextEdit, Formula, Table-TEDS) scaled to [0,100], over the
/// components that are present. Pages flagged missing_gt are skipped.
EvalReport aggregate(const std::vector<PageMetrics>& rows, const OverallWeights& weights = {});

}  // namespace docparse
