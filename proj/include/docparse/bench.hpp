#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "docparse/assemble.hpp"
#include "docparse/layout.hpp"
#include "docparse/metrics.hpp"
#include "docparse/resolution.hpp"

namespace docparse {

enum class BackendKind { Mock, Remote };

struct RunConfig {
    Tier tier = Tier::L();
    LayoutSource layout = LayoutSource::GroundTruth;
    BackendKind recognizer = BackendKind::Mock;
    int jobs = 1;
    uint64_t seed = 0;
    int merge_factor = 1;
    double crop_margin = 0.0;

    std::string dataset_path;
    std::string image_root;  // joined with relative page image paths
    std::string out_dir;
    std::string report_path;

    LayoutOptions layout_opts;
    RemoteOptions remote;
    RecognizerOptions recognizer_opts;

    double region_match_iou = 0.5;
    OverallWeights weights;
    double max_malformed_fraction = 0.0;
};

/// Flat JSON key/value config file; missing keys keep their defaults.
RunConfig load_config(const std::string& path);

struct ThroughputReport {
    double total_time_s = 0.0;
    int64_t pages = 0;
    double pages_per_s = 0.0;
    int64_t tokens_total = 0;
    double tokens_per_s = 0.0;
    std::optional<int64_t> peak_memory_bytes;  // best-effort RSS, not GPU VRAM

    std::string to_json() const;
};

ThroughputReport make_throughput_report(int64_t pages, int64_t tokens, double total_time_s,
                                        std::optional<int64_t> peak_memory_bytes = {});

struct DatasetStats {
    size_t pages = 0;
    size_t malformed_lines = 0;
    std::vector<std::string> diagnostics;  // line-numbered
};

/// Stream pages from a JSONL dataset, constant memory in page count.
/// Throws DatasetError when the malformed fraction exceeds the limit.
DatasetStats load_dataset(const std::string& path,
                          const std::function<void(Page&&, size_t line_no)>& sink,
                          double max_malformed_fraction = 0.0);

Page page_from_json_line(const std::string& line);  // throws DatasetError

struct PageFailure {
    std::string page_id;
    std::string error;
};

struct ParseOutcome {
    ThroughputReport report;
    std::vector<PageFailure> failures;
    std::vector<std::string> page_ids;
};

/// End-to-end run: every page produces {page_id}.md and {page_id}.json in
/// out_dir; the throughput report is written to report_path when set.
ParseOutcome cmd_parse(const RunConfig& config);

struct EvalOutcome {
    EvalReport report;
    std::vector<PageMetrics> rows;
    std::vector<PageFailure> failures;
};

/// Run the pipeline and score it against dataset ground truth. Writes
/// {report_path} (canonical JSON), {report_path}.md (Table-2-style
/// markdown), and {report_path}.pages.jsonl (per-page rows) when set.
EvalOutcome cmd_eval(const RunConfig& config);

struct TokensRow {
    std::string page_id;
    int64_t tokens_s = 0, tokens_m = 0, tokens_l = 0;
};

struct TokensOutcome {
    std::vector<TokensRow> rows;
    double mean_s = 0, mean_m = 0, mean_l = 0;

    std::string to_markdown() const;
};

/// Per-page and mean vision-token counts under each tier budget.
TokensOutcome cmd_tokens(const RunConfig& config);

}  // namespace docparse
