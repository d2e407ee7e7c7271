#include "docparse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <json.hpp>

#include "docparse/errors.hpp"
#include "docparse/otsl.hpp"
#include "docparse/text.hpp"

namespace docparse {

size_t tree_size(const TedNode& t) {
    size_t n = 1;
    for (const auto& c : t.children) n += tree_size(c);
    return n;
}

namespace {

struct ZsTree {
    std::vector<const TedNode*> post;  // postorder, 0-based
    std::vector<int> lld;              // leftmost leaf descendant, postorder index
    std::vector<int> keyroots;
};

void postorder(const TedNode& t, std::vector<const TedNode*>& out) {
    for (const auto& c : t.children) postorder(c, out);
    out.push_back(&t);
}

ZsTree annotate(const TedNode* root) {
    ZsTree z;
    if (!root) return z;
    postorder(*root, z.post);
    const int n = static_cast<int>(z.post.size());
    z.lld.assign(n, 0);
    // Recompute via sizes: node at postorder i spans [i - size + 1, i].
    std::vector<int> sizes(n, 0);
    std::function<int(const TedNode&, int&)> walk = [&](const TedNode& t, int& next) -> int {
        int total = 1;
        for (const auto& c : t.children) total += walk(c, next);
        int idx = next++;
        sizes[idx] = total;
        z.lld[idx] = idx - total + 1;
        return total;
    };
    int next = 0;
    walk(*root, next);
    std::vector<bool> is_keyroot(n, false);
    std::set<int> seen_lld;
    for (int i = n - 1; i >= 0; --i) {
        if (!seen_lld.count(z.lld[i])) {
            is_keyroot[i] = true;
            seen_lld.insert(z.lld[i]);
        }
    }
    for (int i = 0; i < n; ++i)
        if (is_keyroot[i]) z.keyroots.push_back(i);
    return z;
}

}  // namespace

double tree_edit_distance(const TedNode* t1, const TedNode* t2, const TedCosts& costs) {
    auto sub = costs.sub ? costs.sub : [](const TedNode& a, const TedNode& b) {
        return a.label == b.label ? 0.0 : 1.0;
    };
    ZsTree a = annotate(t1);
    ZsTree b = annotate(t2);
    const int n = static_cast<int>(a.post.size());
    const int m = static_cast<int>(b.post.size());
    if (n == 0 || m == 0) {
        double d = 0;
        for (int i = 0; i < n; ++i) d += costs.del(*a.post[i]);
        for (int j = 0; j < m; ++j) d += costs.ins(*b.post[j]);
        return d;
    }

    std::vector<std::vector<double>> treedist(n, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> fd(n + 2, std::vector<double>(m + 2, 0.0));

    for (int i : a.keyroots) {
        for (int j : b.keyroots) {
            const int li = a.lld[i], lj = b.lld[j];
            fd[li][lj] = 0.0;
            for (int di = li; di <= i; ++di)
                fd[di + 1][lj] = fd[di][lj] + costs.del(*a.post[di]);
            for (int dj = lj; dj <= j; ++dj)
                fd[li][dj + 1] = fd[li][dj] + costs.ins(*b.post[dj]);
            for (int di = li; di <= i; ++di) {
                for (int dj = lj; dj <= j; ++dj) {
                    double del = fd[di][dj + 1] + costs.del(*a.post[di]);
                    double ins = fd[di + 1][dj] + costs.ins(*b.post[dj]);
                    double match;
                    if (a.lld[di] == li && b.lld[dj] == lj) {
                        match = fd[di][dj] + sub(*a.post[di], *b.post[dj]);
                        fd[di + 1][dj + 1] = std::min({del, ins, match});
                        treedist[di][dj] = fd[di + 1][dj + 1];
                    } else {
                        match = fd[a.lld[di]][b.lld[dj]] + treedist[di][dj];
                        fd[di + 1][dj + 1] = std::min({del, ins, match});
                    }
                }
            }
        }
    }
    return treedist[n - 1][m - 1];
}

TedNode table_tree_from_html(const std::string& html) {
    TableGrid grid;
    try {
        grid = html_to_grid(html);
    } catch (const UnsupportedMarkup& e) {
        throw ParseFailure(e.what());
    }
    TedNode root;
    root.label = "table";
    root.children.resize(grid.rows);
    for (auto& tr : root.children) tr.label = "tr";
    for (const auto& cell : grid.cells) {
        TedNode td;
        td.label = "td";
        td.colspan = cell.colspan;
        td.rowspan = cell.rowspan;
        td.text = cell.content;
        root.children[cell.row].children.push_back(std::move(td));
    }
    return root;
}

double teds(const std::string& pred_html, const std::string& gt_html, bool structure_only,
            const TedsOptions& opts) {
    TedNode pred = table_tree_from_html(pred_html);
    TedNode gt = table_tree_from_html(gt_html);
    TedCosts costs;
    costs.sub = [&](const TedNode& a, const TedNode& b) -> double {
        if (a.label != b.label) return 1.0;
        if (a.label == "td" && (a.colspan != b.colspan || a.rowspan != b.rowspan)) return 1.0;
        if (structure_only || a.label != "td") return 0.0;
        if (opts.cell_cost == CellCost::Exact) return a.text == b.text ? 0.0 : 1.0;
        return std::min(1.0, norm_edit_distance(a.text, b.text));
    };
    double d = tree_edit_distance(&pred, &gt, costs);
    double denom = static_cast<double>(std::max<size_t>({tree_size(pred), tree_size(gt), 1}));
    return 1.0 - d / denom;
}

size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t subc = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subc});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double norm_edit_distance(const std::string& a, const std::string& b) {
    auto ua = utf8_decode(a);
    auto ub = utf8_decode(b);
    size_t denom = std::max({ua.size(), ub.size(), size_t{1}});
    return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(denom);
}

double reading_order_edit(const ReadingOrder& pred, const ReadingOrder& gt,
                          const std::map<int, int>& matching) {
    std::vector<uint32_t> a, b;
    for (int p : pred) {
        auto it = matching.find(p);
        if (it != matching.end()) a.push_back(static_cast<uint32_t>(it->second));
    }
    for (int g : gt) b.push_back(static_cast<uint32_t>(g));
    if (a.empty() && b.empty()) return 0.0;
    size_t denom = std::max(a.size(), b.size());
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

namespace {

bool is_separator_cell(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) return false;
    size_t i = 0, e = t.size();
    if (t[i] == ':') i++;
    if (e > i && t[e - 1] == ':') e--;
    if (i >= e) return false;
    for (size_t k = i; k < e; ++k)
        if (t[k] != '-') return false;
    return true;
}

std::vector<std::string> split_pipe_row(const std::string& line) {
    std::string t = trim(line);
    if (t.empty() || t.find('|') == std::string::npos)
        throw ParseFailure("pipe table: row without '|': " + line);
    if (!t.empty() && t.front() == '|') t.erase(t.begin());
    if (!t.empty() && t.back() == '|') t.pop_back();
    std::vector<std::string> cells;
    std::string cur;
    for (char c : t) {
        if (c == '|') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

}  // namespace

PipeTable parse_pipe_table(const std::string& s) {
    PipeTable table;
    bool have_header = false;
    for (const auto& raw : split_lines(s)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto cells = split_pipe_row(line);
        bool sep = !cells.empty() &&
                   std::all_of(cells.begin(), cells.end(), is_separator_cell);
        if (sep) continue;
        if (!have_header) {
            table.header = cells;
            have_header = true;
        } else {
            table.rows.push_back(cells);
        }
    }
    if (!have_header) throw ParseFailure("pipe table: no rows");
    return table;
}

std::string canonical_pipe_table(const PipeTable& t) {
    auto emit = [](const std::vector<std::string>& cells) {
        std::string line = "|";
        for (const auto& c : cells) line += " " + c + " |";
        return line;
    };
    std::string out = emit(t.header);
    out += "\n" + emit(std::vector<std::string>(t.header.size(), "---"));
    for (const auto& row : t.rows) out += "\n" + emit(row);
    return out;
}

namespace {

struct ChartEntry {
    std::string row_key, col_key, value;
};

std::vector<ChartEntry> flatten(const PipeTable& t) {
    std::vector<ChartEntry> entries;
    for (const auto& row : t.rows) {
        if (t.header.size() <= 1) {
            if (!row.empty()) entries.push_back({"", t.header.empty() ? "" : t.header[0], row[0]});
            continue;
        }
        std::string row_key = row.empty() ? "" : row[0];
        for (size_t j = 1; j < t.header.size() && j < row.size(); ++j)
            entries.push_back({row_key, t.header[j], row[j]});
    }
    return entries;
}

bool parse_numeric(const std::string& s, double* out) {
    std::string t;
    const std::string src = trim(s);
    for (size_t i = 0; i < src.size();) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == ',' || c == '%' || c == '$') { i++; continue; }
        // UTF-8 currency symbols: euro, pound, yen.
        if (src.compare(i, 3, "\xE2\x82\xAC") == 0) { i += 3; continue; }
        if (src.compare(i, 2, "\xC2\xA3") == 0) { i += 2; continue; }
        if (src.compare(i, 2, "\xC2\xA5") == 0) { i += 2; continue; }
        t.push_back(src[i++]);
    }
    t = trim(t);
    if (t.empty()) return false;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    *out = v;
    return true;
}

double entry_similarity(const ChartEntry& p, const ChartEntry& g) {
    std::string pk = p.row_key + '\x1f' + p.col_key;
    std::string gk = g.row_key + '\x1f' + g.col_key;
    double key_sim = 1.0 - norm_edit_distance(pk, gk);
    double pv, gv;
    double val_sim;
    if (parse_numeric(p.value, &pv) && parse_numeric(g.value, &gv)) {
        double rel = gv != 0.0 ? std::abs(pv - gv) / std::abs(gv) : (pv == 0.0 ? 0.0 : 1.0);
        val_sim = 1.0 - std::min(1.0, rel);
    } else {
        val_sim = 1.0 - norm_edit_distance(p.value, g.value);
    }
    return key_sim * val_sim;
}

}  // namespace

double rms_f1(const std::string& pred_table, const std::string& gt_table) {
    bool pred_empty = trim(pred_table).empty();
    bool gt_empty = trim(gt_table).empty();
    if (pred_empty && gt_empty) return 1.0;
    if (pred_empty || gt_empty) return 0.0;

    auto pred = flatten(parse_pipe_table(pred_table));
    auto gt = flatten(parse_pipe_table(gt_table));
    if (pred.empty() && gt.empty()) return 1.0;
    if (pred.empty() || gt.empty()) return 0.0;

    struct Pair {
        double sim;
        size_t gi, pi;
    };
    std::vector<Pair> pairs;
    for (size_t gi = 0; gi < gt.size(); ++gi)
        for (size_t pi = 0; pi < pred.size(); ++pi)
            pairs.push_back({entry_similarity(pred[pi], gt[gi]), gi, pi});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.gi != b.gi) return a.gi < b.gi;
        return a.pi < b.pi;
    });
    std::vector<bool> used_g(gt.size(), false), used_p(pred.size(), false);
    double matched = 0.0;
    for (const auto& pr : pairs) {
        if (used_g[pr.gi] || used_p[pr.pi]) continue;
        used_g[pr.gi] = true;
        used_p[pr.pi] = true;
        matched += pr.sim;
    }
    double precision = matched / static_cast<double>(pred.size());
    double recall = matched / static_cast<double>(gt.size());
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

std::vector<std::string> latex_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    auto cps = utf8_decode(s);
    // Work over the raw string for command detection, over code points for
    // everything else.
    size_t i = 0;
    const size_t n = s.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) { i++; continue; }
        if (c == '\\' && i + 1 < n && std::isalpha(static_cast<unsigned char>(s[i + 1]))) {
            size_t j = i + 1;
            while (j < n && std::isalpha(static_cast<unsigned char>(s[j]))) j++;
            tokens.push_back(s.substr(i, j - i));
            i = j;
            continue;
        }
        // One UTF-8 code point.
        size_t len = 1;
        if ((c & 0xE0) == 0xC0) len = 2;
        else if ((c & 0xF0) == 0xE0) len = 3;
        else if ((c & 0xF8) == 0xF0) len = 4;
        len = std::min(len, n - i);
        tokens.push_back(s.substr(i, len));
        i += len;
    }
    return tokens;
}

double bleu4(const std::string& pred, const std::string& gt) {
    auto p = latex_tokens(pred);
    auto g = latex_tokens(gt);
    if (p.empty() && g.empty()) return 1.0;
    if (p.empty() || g.empty()) return 0.0;
    const size_t max_n = std::min<size_t>({4, p.size(), g.size()});

    double log_sum = 0.0;
    for (size_t n = 1; n <= max_n; ++n) {
        std::map<std::vector<std::string>, int> gt_counts;
        for (size_t i = 0; i + n <= g.size(); ++i)
            gt_counts[std::vector<std::string>(g.begin() + i, g.begin() + i + n)]++;
        std::map<std::vector<std::string>, int> pred_counts;
        for (size_t i = 0; i + n <= p.size(); ++i)
            pred_counts[std::vector<std::string>(p.begin() + i, p.begin() + i + n)]++;
        long matched = 0, total = 0;
        for (const auto& [ngram, count] : pred_counts) {
            total += count;
            auto it = gt_counts.find(ngram);
            if (it != gt_counts.end()) matched += std::min(count, it->second);
        }
        double pn = matched > 0 ? static_cast<double>(matched) / static_cast<double>(total)
                                : (static_cast<double>(matched) + 1.0) /
                                      (static_cast<double>(total) + 1.0);
        log_sum += std::log(pn) / static_cast<double>(max_n);
    }
    double bp = p.size() >= g.size()
                    ? 1.0
                    : std::exp(1.0 - static_cast<double>(g.size()) / static_cast<double>(p.size()));
    return std::clamp(bp * std::exp(log_sum), 0.0, 1.0);
}

std::map<int, int> match_regions(const std::vector<Region>& pred, const std::vector<Region>& gt,
                                 double iou_min) {
    struct Pair {
        double score;
        size_t gi, pi;
    };
    std::vector<Pair> pairs;
    for (size_t gi = 0; gi < gt.size(); ++gi) {
        for (size_t pi = 0; pi < pred.size(); ++pi) {
            if (pred[pi].category != gt[gi].category) continue;
            double score = iou(pred[pi].bbox, gt[gi].bbox);
            if (score >= iou_min) pairs.push_back({score, gi, pi});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.gi != b.gi) return a.gi < b.gi;
        return a.pi < b.pi;
    });
    std::vector<bool> used_g(gt.size(), false), used_p(pred.size(), false);
    std::map<int, int> out;
    for (const auto& pr : pairs) {
        if (used_g[pr.gi] || used_p[pr.pi]) continue;
        used_g[pr.gi] = true;
        used_p[pr.pi] = true;
        out[static_cast<int>(pr.pi)] = static_cast<int>(pr.gi);
    }
    return out;
}

namespace {

struct Mean {
    double sum = 0.0;
    int count = 0;
    void add(double v) { sum += v; count++; }
    std::optional<double> value() const {
        if (count == 0) return std::nullopt;
        return sum / count;
    }
};

std::string fmt4(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

}  // namespace

EvalReport aggregate(const std::vector<PageMetrics>& rows, const OverallWeights& weights) {
    EvalReport report;
    Mean text, formula, teds_m, teds_s, chart, order;
    for (const auto& row : rows) {
        if (row.missing_gt) {
            report.pages_skipped++;
            continue;
        }
        report.pages++;
        if (row.text_edit) text.add(*row.text_edit);
        if (row.formula_bleu) formula.add(*row.formula_bleu);
        if (row.table_teds) teds_m.add(*row.table_teds);
        if (row.table_teds_s) teds_s.add(*row.table_teds_s);
        if (row.chart_rms_f1) chart.add(*row.chart_rms_f1);
        if (row.order_edit) order.add(*row.order_edit);
    }
    report.text_edit = text.value();
    report.formula = formula.value();
    report.table_teds = teds_m.value();
    report.table_teds_s = teds_s.value();
    report.chart_rms_f1 = chart.value();
    report.order_edit = order.value();

    double wsum = 0.0, vsum = 0.0;
    if (report.text_edit) { vsum += weights.text * (1.0 - *report.text_edit) * 100.0; wsum += weights.text; }
    if (report.formula) { vsum += weights.formula * *report.formula * 100.0; wsum += weights.formula; }
    if (report.table_teds) { vsum += weights.table * *report.table_teds * 100.0; wsum += weights.table; }
    if (wsum > 0.0) report.overall = vsum / wsum;
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("overall", overall);
    put("text_edit", text_edit);
    put("formula", formula);
    put("table_teds", table_teds);
    put("table_teds_s", table_teds_s);
    put("chart_rms_f1", chart_rms_f1);
    put("reading_order_edit", order_edit);
    j["pages"] = pages;
    j["pages_skipped"] = pages_skipped;
    return j.dump(2) + "\n";
}

std::string EvalReport::to_markdown() const {
    std::string out;
    out += "| Overall | Text-Edit | Formula | Table-TEDS | Table-TEDS-S | Reading-Order-Edit |\n";
    out += "| --- | --- | --- | --- | --- | --- |\n";
    out += "| " + fmt4(overall) + " | " + fmt4(text_edit) + " | " + fmt4(formula) + " | " +
           fmt4(table_teds) + " | " + fmt4(table_teds_s) + " | " + fmt4(order_edit) + " |\n";
    return out;
}

}  // namespace docparse
