#include "docparse/bench.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "docparse/errors.hpp"
#include "docparse/otsl.hpp"
#include "docparse/text.hpp"

namespace fs = std::filesystem;

namespace docparse {

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a flat JSON object: " + path);

    RunConfig c;
    if (j.contains("tier")) {
        if (j["tier"].is_string()) {
            c.tier = Tier::from_name(j["tier"].get<std::string>());
        } else {
            c.tier.name = "custom";
            c.tier.min_pixels = j["tier"].value("min_pixels", int64_t{3136});
            c.tier.max_pixels = j["tier"].value("max_pixels", int64_t{627200});
        }
    }
    if (j.contains("min_pixels")) c.tier.min_pixels = j["min_pixels"].get<int64_t>();
    if (j.contains("max_pixels")) {
        c.tier.max_pixels = j["max_pixels"].get<int64_t>();
        c.tier.name = "custom";
    }
    if (c.tier.min_pixels % kPatchArea || c.tier.max_pixels % kPatchArea ||
        c.tier.min_pixels <= 0 || c.tier.max_pixels < c.tier.min_pixels)
        throw ConfigError("tier budgets must be positive multiples of 784 with min <= max");
    if (j.contains("layout")) c.layout = layout_source_from_string(j["layout"].get<std::string>());
    if (j.contains("recognizer")) {
        std::string r = j["recognizer"].get<std::string>();
        if (r == "mock") c.recognizer = BackendKind::Mock;
        else if (r == "remote") c.recognizer = BackendKind::Remote;
        else throw ConfigError("unknown recognizer: " + r);
    }
    c.jobs = j.value("jobs", c.jobs);
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    c.seed = j.value("seed", c.seed);
    c.merge_factor = j.value("merge_factor", c.merge_factor);
    if (c.merge_factor != 1 && c.merge_factor != 4)
        throw ConfigError("merge_factor must be 1 or 4");
    c.crop_margin = j.value("crop_margin", c.crop_margin);
    c.dataset_path = j.value("dataset", c.dataset_path);
    c.image_root = j.value("image_root", c.image_root);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.report_path = j.value("report", c.report_path);
    c.layout_opts.dedup_iou = j.value("dedup_iou", c.layout_opts.dedup_iou);
    c.layout_opts.min_score = j.value("min_score", c.layout_opts.min_score);
    c.layout_opts.column_overlap = j.value("column_overlap", c.layout_opts.column_overlap);
    c.remote.endpoint = j.value("endpoint", c.remote.endpoint);
    c.remote.model = j.value("model", c.remote.model);
    c.remote.auth_env = j.value("auth_env", c.remote.auth_env);
    c.remote.timeout_s = j.value("timeout_s", c.remote.timeout_s);
    c.remote.retries = j.value("retries", c.remote.retries);
    c.remote.backoff_base_s = j.value("backoff_s", c.remote.backoff_base_s);
    c.remote.max_tokens = j.value("max_tokens", c.remote.max_tokens);
    c.layout_opts.remote = c.remote;
    c.recognizer_opts.otsl_interleaved = j.value("otsl_interleaved", true);
    c.recognizer_opts.max_in_flight = j.value("max_in_flight", c.recognizer_opts.max_in_flight);
    c.region_match_iou = j.value("region_match_iou", c.region_match_iou);
    c.weights.text = j.value("weight_text", c.weights.text);
    c.weights.formula = j.value("weight_formula", c.weights.formula);
    c.weights.table = j.value("weight_table", c.weights.table);
    c.max_malformed_fraction = j.value("max_malformed_fraction", c.max_malformed_fraction);
    if (j.contains("prompt_ocr"))
        c.recognizer_opts.prompts[RecognitionTask::Ocr] = j["prompt_ocr"].get<std::string>();
    if (j.contains("prompt_table"))
        c.recognizer_opts.prompts[RecognitionTask::TableOtsl] = j["prompt_table"].get<std::string>();
    if (j.contains("prompt_formula"))
        c.recognizer_opts.prompts[RecognitionTask::FormulaLatex] =
            j["prompt_formula"].get<std::string>();
    if (j.contains("prompt_chart"))
        c.recognizer_opts.prompts[RecognitionTask::ChartTable] = j["prompt_chart"].get<std::string>();
    return c;
}

ThroughputReport make_throughput_report(int64_t pages, int64_t tokens, double total_time_s,
                                        std::optional<int64_t> peak_memory_bytes) {
    ThroughputReport r;
    r.pages = pages;
    r.tokens_total = tokens;
    r.total_time_s = total_time_s;
    r.pages_per_s = (pages > 0 && total_time_s > 0) ? static_cast<double>(pages) / total_time_s : 0.0;
    r.tokens_per_s =
        (tokens > 0 && total_time_s > 0) ? static_cast<double>(tokens) / total_time_s : 0.0;
    r.peak_memory_bytes = peak_memory_bytes;
    return r;
}

std::string ThroughputReport::to_json() const {
    nlohmann::json j;
    j["total_time_s"] = total_time_s;
    j["pages"] = pages;
    j["pages_per_s"] = pages_per_s;
    j["tokens_total"] = tokens_total;
    j["tokens_per_s"] = tokens_per_s;
    if (peak_memory_bytes) j["peak_memory_bytes"] = *peak_memory_bytes;
    return j.dump(2) + "\n";
}

Page page_from_json_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
        throw DatasetError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw DatasetError("page line is not a JSON object");
    Page page;
    page.width = j.value("width", 0.0);
    page.height = j.value("height", 0.0);
    if (page.width <= 0 || page.height <= 0)
        throw DatasetError("page width/height must be positive");
    if (j.contains("image") && !j["image"].is_null())
        page.image_path = j["image"].get<std::string>();
    int auto_id = 0;
    for (const auto& jr : j.value("regions", nlohmann::json::array())) {
        Region r;
        r.id = jr.contains("id") && !jr["id"].is_null() ? jr["id"].get<std::string>()
                                                        : "r" + std::to_string(auto_id);
        auto_id++;
        const auto& bb = jr.at("bbox");
        if (!bb.is_array() || bb.size() != 4) throw DatasetError("region bbox must be [x0,y0,x1,y1]");
        r.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
                  bb[3].get<double>()};
        if (r.bbox.x1 < r.bbox.x0 || r.bbox.y1 < r.bbox.y0)
            throw DatasetError("region bbox has negative extent");
        r.category = category_from_string(jr.value("category", "other"));
        if (jr.contains("content") && !jr["content"].is_null())
            r.gt_content = jr["content"].get<std::string>();
        if (jr.contains("order") && !jr["order"].is_null()) r.gt_order = jr["order"].get<int>();
        page.regions.push_back(std::move(r));
    }
    if (j.contains("order_matrix") && !j["order_matrix"].is_null())
        page.order_matrix = j["order_matrix"].get<std::vector<std::vector<double>>>();
    return page;
}

DatasetStats load_dataset(const std::string& path,
                          const std::function<void(Page&&, size_t)>& sink,
                          double max_malformed_fraction) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset: " + path);
    DatasetStats stats;
    std::string line;
    size_t line_no = 0;
    size_t total_lines = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (trim(line).empty()) continue;
        total_lines++;
        try {
            sink(page_from_json_line(line), line_no);
            stats.pages++;
        } catch (const DatasetError& e) {
            stats.malformed_lines++;
            stats.diagnostics.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (total_lines > 0) {
        double frac = static_cast<double>(stats.malformed_lines) / static_cast<double>(total_lines);
        if (frac > max_malformed_fraction)
            throw DatasetError("dataset " + path + ": " + std::to_string(stats.malformed_lines) +
                               " of " + std::to_string(total_lines) + " lines malformed" +
                               (stats.diagnostics.empty() ? "" : "; first: " +
                                                                      stats.diagnostics.front()));
    }
    return stats;
}

namespace {

std::string page_id_of(const Page&, size_t index, const std::string& line_id) {
    if (!line_id.empty()) return line_id;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "page-%06zu", index);
    return buf;
}

// "id" is an accepted extension key on page lines; absent -> positional id.
std::string line_page_id(const std::string& line) {
    try {
        auto j = nlohmann::json::parse(line);
        if (j.is_object() && j.contains("id") && j["id"].is_string())
            return j["id"].get<std::string>();
    } catch (...) {
    }
    return {};
}

std::string resolve_image(const Page& page, const std::string& image_root) {
    if (!page.image_path) return {};
    fs::path p = *page.image_path;
    if (p.is_relative() && !image_root.empty()) p = fs::path(image_root) / p;
    return p.string();
}

struct PipelineResult {
    LayoutResult layout;
    std::vector<RecognizedElement> recognized;
    AssembledPage assembled;
    int64_t tokens = 0;
};

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineResult run_pipeline(Page page, const RunConfig& cfg, RecognizerBackend& backend) {
    PipelineResult out;
    if (page.image_path) page.image_path = resolve_image(page, cfg.image_root);
    out.layout = analyze(page, cfg.layout, cfg.layout_opts);

    std::string image_bytes;
    if (cfg.recognizer == BackendKind::Remote && page.image_path)
        image_bytes = read_bytes(*page.image_path);

    std::vector<BatchItem> items;
    for (const auto& region : out.layout.regions) {
        if (!task_for(region.category)) continue;
        BBox crop = crop_spec(region, page, cfg.crop_margin);
        int64_t w = std::max<int64_t>(1, llround(crop.width()));
        int64_t h = std::max<int64_t>(1, llround(crop.height()));
        ResizePlan plan = plan_resize(w, h, cfg.tier, cfg.merge_factor);
        out.tokens += plan.tokens;
        items.push_back({region, image_bytes, plan});
    }
    out.recognized = recognize_batch(items, backend, cfg.recognizer_opts);
    out.assembled = assemble(out.layout, out.recognized, cfg.recognizer_opts.otsl_interleaved);
    return out;
}

std::unique_ptr<RecognizerBackend> make_backend(const RunConfig& cfg) {
    if (cfg.recognizer == BackendKind::Remote) {
        if (cfg.remote.endpoint.empty())
            throw ConfigError("remote recognizer requires an endpoint");
        return std::make_unique<RemoteBackend>(cfg.remote);
    }
    return std::make_unique<MockBackend>();
}

struct QueuedPage {
    Page page;
    std::string page_id;
    size_t index = 0;
};

// Streams the dataset through a bounded queue into `jobs` workers; the
// dataset is never fully resident.
DatasetStats for_each_page_parallel(const RunConfig& cfg,
                                    const std::function<void(QueuedPage&&)>& fn) {
    std::deque<QueuedPage> queue;
    std::mutex mu;
    std::condition_variable cv_push, cv_pop;
    bool done = false;
    std::exception_ptr worker_error;
    const size_t capacity = static_cast<size_t>(cfg.jobs) * 2 + 2;

    auto worker = [&] {
        while (true) {
            QueuedPage item;
            {
                std::unique_lock lock(mu);
                cv_pop.wait(lock, [&] { return done || !queue.empty(); });
                if (queue.empty()) return;
                item = std::move(queue.front());
                queue.pop_front();
            }
            cv_push.notify_one();
            try {
                fn(std::move(item));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!worker_error) worker_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < cfg.jobs; ++i) pool.emplace_back(worker);

    DatasetStats stats;
    try {
        size_t index = 0;
        std::ifstream in(cfg.dataset_path);
        if (!in) throw DatasetError("cannot open dataset: " + cfg.dataset_path);
        std::string line;
        size_t line_no = 0, total_lines = 0;
        while (std::getline(in, line)) {
            line_no++;
            if (trim(line).empty()) continue;
            total_lines++;
            QueuedPage item;
            try {
                item.page = page_from_json_line(line);
            } catch (const DatasetError& e) {
                stats.malformed_lines++;
                stats.diagnostics.push_back("line " + std::to_string(line_no) + ": " + e.what());
                continue;
            }
            item.page_id = page_id_of(item.page, index, line_page_id(line));
            item.index = index++;
            stats.pages++;
            {
                std::unique_lock lock(mu);
                cv_push.wait(lock, [&] { return queue.size() < capacity; });
                queue.push_back(std::move(item));
            }
            cv_pop.notify_one();
        }
        if (total_lines > 0) {
            double frac =
                static_cast<double>(stats.malformed_lines) / static_cast<double>(total_lines);
            if (frac > cfg.max_malformed_fraction)
                throw DatasetError("dataset " + cfg.dataset_path + ": " +
                                   std::to_string(stats.malformed_lines) + " of " +
                                   std::to_string(total_lines) + " lines malformed");
        }
    } catch (...) {
        {
            std::lock_guard lock(mu);
            done = true;
        }
        cv_pop.notify_all();
        for (auto& t : pool) t.join();
        throw;
    }
    {
        std::lock_guard lock(mu);
        done = true;
    }
    cv_pop.notify_all();
    for (auto& t : pool) t.join();
    if (worker_error) std::rethrow_exception(worker_error);
    return stats;
}

std::optional<int64_t> peak_rss_bytes() {
    struct rusage ru{};
    if (getrusage(RUSAGE_SELF, &ru) != 0) return std::nullopt;
    return static_cast<int64_t>(ru.ru_maxrss) * 1024;  // linux reports KiB
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace

ParseOutcome cmd_parse(const RunConfig& cfg) {
    if (cfg.out_dir.empty()) throw ConfigError("cmd_parse: out_dir is required");
    fs::create_directories(cfg.out_dir);
    auto backend = make_backend(cfg);

    ParseOutcome outcome;
    std::mutex mu;
    std::atomic<int64_t> tokens{0};
    auto start = std::chrono::steady_clock::now();

    for_each_page_parallel(cfg, [&](QueuedPage&& item) {
        try {
            PipelineResult result = run_pipeline(std::move(item.page), cfg, *backend);
            tokens.fetch_add(result.tokens);
            write_file(fs::path(cfg.out_dir) / (item.page_id + ".md"),
                       result.assembled.markdown + "\n");
            write_file(fs::path(cfg.out_dir) / (item.page_id + ".json"),
                       to_json(result.assembled));
            std::lock_guard lock(mu);
            outcome.page_ids.push_back(item.page_id);
        } catch (const Error& e) {
            std::lock_guard lock(mu);
            outcome.failures.push_back({item.page_id, e.what()});
        }
    });

    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome.report = make_throughput_report(
        static_cast<int64_t>(outcome.page_ids.size()), tokens.load(), elapsed, peak_rss_bytes());
    std::sort(outcome.page_ids.begin(), outcome.page_ids.end());
    if (!cfg.report_path.empty()) write_file(cfg.report_path, outcome.report.to_json());
    return outcome;
}

namespace {

struct Mean {
    double sum = 0;
    int count = 0;
    void add(double v) { sum += v; count++; }
    std::optional<double> value() const {
        return count ? std::optional<double>(sum / count) : std::nullopt;
    }
};

std::string gt_table_html(const std::string& gt_content, bool interleaved) {
    std::string t = trim(gt_content);
    if (t.rfind("<table", 0) == 0) return t;
    return grid_to_html(otsl_to_grid(parse_otsl(t, interleaved)));
}

PageMetrics score_page(const Page& page, const PipelineResult& result, const RunConfig& cfg,
                       const std::string& page_id) {
    PageMetrics row;
    row.page_id = page_id;

    const auto& gt_regions = page.regions;
    bool any_routable_gt = false, any_gt_content = false;
    for (const auto& r : gt_regions) {
        if (!task_for(r.category)) continue;
        any_routable_gt = true;
        if (r.gt_content) any_gt_content = true;
    }
    if (any_routable_gt && !any_gt_content) {
        row.missing_gt = true;
        return row;
    }

    auto matching = match_regions(result.layout.regions, gt_regions, cfg.region_match_iou);

    std::map<std::string, const RecognizedElement*> rec_by_id;
    for (const auto& r : result.recognized) rec_by_id[r.region.id] = &r;

    const bool interleaved = cfg.recognizer_opts.otsl_interleaved;
    Mean text, formula, teds_m, teds_s, chart;
    for (const auto& [pi, gi] : matching) {
        const Region& gt = gt_regions[gi];
        if (!gt.gt_content) continue;
        auto task = task_for(gt.category);
        if (!task) continue;
        auto it = rec_by_id.find(result.layout.regions[pi].id);
        if (it == rec_by_id.end()) continue;
        const RecognizedElement& rec = *it->second;
        switch (*task) {
            case RecognitionTask::Ocr:
                text.add(norm_edit_distance(rec.payload,
                                            normalize_payload(RecognitionTask::Ocr, *gt.gt_content)));
                break;
            case RecognitionTask::FormulaLatex:
                formula.add(bleu4(rec.payload, normalize_payload(RecognitionTask::FormulaLatex,
                                                                 *gt.gt_content)));
                break;
            case RecognitionTask::TableOtsl: {
                double v = 0.0, vs = 0.0;
                try {
                    std::string gt_html = gt_table_html(*gt.gt_content, interleaved);
                    std::string pred_html =
                        grid_to_html(otsl_to_grid(parse_otsl(rec.payload, interleaved)));
                    v = teds(pred_html, gt_html, /*structure_only=*/false);
                    vs = teds(pred_html, gt_html, /*structure_only=*/true);
                } catch (const Error&) {
                    // Unparseable prediction or ground truth scores zero.
                }
                teds_m.add(v);
                teds_s.add(vs);
                break;
            }
            case RecognitionTask::ChartTable:
                chart.add(rms_f1(rec.payload,
                                 normalize_payload(RecognitionTask::ChartTable, *gt.gt_content)));
                break;
        }
    }
    row.text_edit = text.value();
    row.formula_bleu = formula.value();
    row.table_teds = teds_m.value();
    row.table_teds_s = teds_s.value();
    row.chart_rms_f1 = chart.value();

    // Reading order against regions carrying gt_order.
    std::vector<std::pair<int, int>> ordered;  // (gt_order, gt index)
    for (size_t gi = 0; gi < gt_regions.size(); ++gi)
        if (gt_regions[gi].gt_order)
            ordered.emplace_back(*gt_regions[gi].gt_order, static_cast<int>(gi));
    if (!ordered.empty()) {
        std::sort(ordered.begin(), ordered.end());
        ReadingOrder gt_order;
        for (const auto& [o, gi] : ordered) gt_order.push_back(gi);
        std::map<int, int> order_matching;
        for (const auto& [pi, gi] : matching)
            if (gt_regions[gi].gt_order) order_matching[pi] = gi;
        row.order_edit = reading_order_edit(result.layout.order, gt_order, order_matching);
    }
    return row;
}

std::string page_metrics_json(const PageMetrics& row) {
    nlohmann::json j;
    j["page_id"] = row.page_id;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("text_edit", row.text_edit);
    put("formula_bleu", row.formula_bleu);
    put("table_teds", row.table_teds);
    put("table_teds_s", row.table_teds_s);
    put("chart_rms_f1", row.chart_rms_f1);
    put("reading_order_edit", row.order_edit);
    if (row.missing_gt) j["missing_gt"] = true;
    return j.dump();
}

}  // namespace

EvalOutcome cmd_eval(const RunConfig& cfg) {
    auto backend = make_backend(cfg);
    EvalOutcome outcome;
    std::mutex mu;
    std::vector<std::pair<size_t, PageMetrics>> indexed_rows;

    for_each_page_parallel(cfg, [&](QueuedPage&& item) {
        Page page = item.page;  // keep the annotations for scoring
        try {
            PipelineResult result = run_pipeline(page, cfg, *backend);
            PageMetrics row = score_page(page, result, cfg, item.page_id);
            std::lock_guard lock(mu);
            indexed_rows.emplace_back(item.index, std::move(row));
        } catch (const MissingGroundTruth&) {
            PageMetrics row;
            row.page_id = item.page_id;
            row.missing_gt = true;
            std::lock_guard lock(mu);
            indexed_rows.emplace_back(item.index, std::move(row));
        } catch (const Error& e) {
            std::lock_guard lock(mu);
            outcome.failures.push_back({item.page_id, e.what()});
        }
    });

    std::sort(indexed_rows.begin(), indexed_rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [idx, row] : indexed_rows) outcome.rows.push_back(std::move(row));
    outcome.report = aggregate(outcome.rows, cfg.weights);

    if (!cfg.report_path.empty()) {
        write_file(cfg.report_path, outcome.report.to_json());
        write_file(cfg.report_path + ".md", outcome.report.to_markdown());
        std::string rows_out;
        for (const auto& row : outcome.rows) rows_out += page_metrics_json(row) + "\n";
        write_file(cfg.report_path + ".pages.jsonl", rows_out);
    }
    return outcome;
}

TokensOutcome cmd_tokens(const RunConfig& cfg) {
    TokensOutcome outcome;
    const Tier tiers[3] = {Tier::S(), Tier::M(), Tier::L()};

    std::mutex mu;
    std::vector<std::pair<size_t, TokensRow>> indexed;
    for_each_page_parallel(cfg, [&](QueuedPage&& item) {
        TokensRow row;
        row.page_id = item.page_id;
        int64_t* sums[3] = {&row.tokens_s, &row.tokens_m, &row.tokens_l};
        for (const auto& region : item.page.regions) {
            auto clamped = clamp_region(region, item.page);
            if (!clamped) continue;
            int64_t w = std::max<int64_t>(1, llround(clamped->bbox.width()));
            int64_t h = std::max<int64_t>(1, llround(clamped->bbox.height()));
            for (int t = 0; t < 3; ++t)
                *sums[t] += plan_resize(w, h, tiers[t], cfg.merge_factor).tokens;
        }
        std::lock_guard lock(mu);
        indexed.emplace_back(item.index, std::move(row));
    });
    std::sort(indexed.begin(), indexed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double s = 0, m = 0, l = 0;
    for (auto& [idx, row] : indexed) {
        s += static_cast<double>(row.tokens_s);
        m += static_cast<double>(row.tokens_m);
        l += static_cast<double>(row.tokens_l);
        outcome.rows.push_back(std::move(row));
    }
    if (!outcome.rows.empty()) {
        outcome.mean_s = s / static_cast<double>(outcome.rows.size());
        outcome.mean_m = m / static_cast<double>(outcome.rows.size());
        outcome.mean_l = l / static_cast<double>(outcome.rows.size());
    }
    if (!cfg.report_path.empty()) write_file(cfg.report_path, outcome.to_markdown());
    return outcome;
}

std::string TokensOutcome::to_markdown() const {
    std::string out = "| Page | Tokens-S | Tokens-M | Tokens-L |\n| --- | --- | --- | --- |\n";
    for (const auto& row : rows)
        out += "| " + row.page_id + " | " + std::to_string(row.tokens_s) + " | " +
               std::to_string(row.tokens_m) + " | " + std::to_string(row.tokens_l) + " |\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "| mean | %.2f | %.2f | %.2f |\n", mean_s, mean_m, mean_l);
    out += buf;
    return out;
}

}  // namespace docparse
