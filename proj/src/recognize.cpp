#include "docparse/recognize.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "docparse/errors.hpp"
#include "docparse/metrics.hpp"
#include "docparse/otsl.hpp"
#include "docparse/text.hpp"

namespace docparse {

std::string to_string(RecognitionTask t) {
    switch (t) {
        case RecognitionTask::Ocr: return "ocr";
        case RecognitionTask::TableOtsl: return "table_otsl";
        case RecognitionTask::FormulaLatex: return "formula_latex";
        case RecognitionTask::ChartTable: return "chart_table";
    }
    return "ocr";
}

std::optional<RecognitionTask> task_for(ElementCategory category) {
    switch (category) {
        case ElementCategory::Text:
        case ElementCategory::Title: return RecognitionTask::Ocr;
        case ElementCategory::Table: return RecognitionTask::TableOtsl;
        case ElementCategory::Formula: return RecognitionTask::FormulaLatex;
        case ElementCategory::Chart: return RecognitionTask::ChartTable;
        case ElementCategory::Figure:
        case ElementCategory::Other: return std::nullopt;
    }
    return std::nullopt;
}

std::string build_prompt(RecognitionTask task, const RecognizerOptions& opts) {
    auto it = opts.prompts.find(task);
    if (it != opts.prompts.end()) return it->second;
    switch (task) {
        case RecognitionTask::Ocr:
            return "Transcribe all text in the image exactly as written.";
        case RecognitionTask::TableOtsl:
            return "Parse the table in the image into OTSL structure tokens "
                   "(fcel/ecel/lcel/ucel/xcel/nl) with cell content in quotes.";
        case RecognitionTask::FormulaLatex:
            return "Transcribe the formula in the image into LaTeX, using \\(...\\) "
                   "for inline and \\[...\\] for display style.";
        case RecognitionTask::ChartTable:
            return "Extract the data from the chart in the image into a Markdown table.";
    }
    return "";
}

namespace {

std::string normalize_ocr(const std::string& raw) {
    auto lines = split_lines(raw);
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        if (i) out.push_back('\n');
        out += line;
    }
    // Collapse trailing blank lines.
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

// True when s is wrapped by the given pair and the wrapper depth never
// returns to zero before the end (so "\(a\) b \(c\)" is not "wrapped").
bool strippable(const std::string& s, const std::string& open, const std::string& close) {
    if (s.size() < open.size() + close.size()) return false;
    if (s.compare(0, open.size(), open) != 0) return false;
    if (s.compare(s.size() - close.size(), close.size(), close) != 0) return false;
    int depth = 0;
    for (size_t i = 0; i + 1 < s.size();) {
        if (s[i] == '\\' && (s[i + 1] == '(' || s[i + 1] == '[')) { depth++; i += 2; continue; }
        if (s[i] == '\\' && (s[i + 1] == ')' || s[i + 1] == ']')) {
            depth--;
            i += 2;
            if (depth == 0 && i < s.size()) return false;
            continue;
        }
        i++;
    }
    return true;
}

std::string normalize_formula(const std::string& raw) {
    std::string t = trim(raw);
    bool inline_style = false;
    while (true) {
        if (strippable(t, "\\(", "\\)")) {
            inline_style = true;
            t = trim(t.substr(2, t.size() - 4));
        } else if (strippable(t, "\\[", "\\]")) {
            t = trim(t.substr(2, t.size() - 4));
        } else {
            break;
        }
    }
    // Display by default; inline only when the raw output carried it.
    return inline_style ? "\\(" + t + "\\)" : "\\[" + t + "\\]";
}

std::string normalize_otsl(const std::string& raw, bool interleaved) {
    try {
        return serialize_otsl(parse_otsl(raw, interleaved), interleaved);
    } catch (const ParseFailure&) {
        return trim(raw);
    }
}

std::string normalize_chart(const std::string& raw) {
    try {
        return canonical_pipe_table(parse_pipe_table(raw));
    } catch (const ParseFailure&) {
        return trim(raw);
    }
}

}  // namespace

std::string normalize_payload(RecognitionTask task, const std::string& raw,
                              bool otsl_interleaved) {
    switch (task) {
        case RecognitionTask::Ocr: return normalize_ocr(raw);
        case RecognitionTask::FormulaLatex: return normalize_formula(raw);
        case RecognitionTask::TableOtsl: return normalize_otsl(raw, otsl_interleaved);
        case RecognitionTask::ChartTable: return normalize_chart(raw);
    }
    return raw;
}

std::vector<std::string> validate_payload(RecognitionTask task, const std::string& payload,
                                          bool otsl_interleaved) {
    std::vector<std::string> diags;
    switch (task) {
        case RecognitionTask::Ocr:
            break;
        case RecognitionTask::FormulaLatex: {
            bool inline_ok = strippable(payload, "\\(", "\\)");
            bool display_ok = strippable(payload, "\\[", "\\]");
            if (!inline_ok && !display_ok)
                diags.push_back("formula not wrapped in \\(...\\) or \\[...\\]");
            break;
        }
        case RecognitionTask::TableOtsl: {
            try {
                auto seq = parse_otsl(payload, otsl_interleaved);
                for (const auto& v : validate(seq)) diags.push_back(v.message);
            } catch (const ParseFailure& e) {
                diags.push_back(e.what());
            }
            break;
        }
        case RecognitionTask::ChartTable: {
            try {
                parse_pipe_table(payload);
            } catch (const ParseFailure& e) {
                diags.push_back(e.what());
            }
            break;
        }
    }
    return diags;
}

std::string MockBackend::run(RecognitionTask, const std::string&, const std::string&,
                             const ResizePlan&, const Region& region) {
    if (!region.gt_content)
        throw MissingGroundTruth("mock backend: region " + region.id + " has no gt content");
    return *region.gt_content;
}

std::string base64_encode(const std::string& bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 2 < bytes.size()) {
        uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                     static_cast<unsigned char>(bytes[i + 2]);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == bytes.size()) {
        uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                     (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string RemoteBackend::run(RecognitionTask, const std::string& prompt,
                               const std::string& image_bytes, const ResizePlan&,
                               const Region& region) {
    nlohmann::json body;
    body["model"] = opts_.model;
    body["temperature"] = 0;
    body["max_tokens"] = opts_.max_tokens;
    nlohmann::json content = nlohmann::json::array();
    content.push_back({{"type", "image_url"},
                       {"image_url",
                        {{"url", "data:image/png;base64," + base64_encode(image_bytes)}}}});
    content.push_back({{"type", "text"}, {"text", prompt}});
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", content}}});

    std::string last_error;
    for (int attempt = 0; attempt <= opts_.retries; ++attempt) {
        if (attempt > 0) {
            auto delay = opts_.backoff_base_s * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client cli(opts_.endpoint);
        cli.set_connection_timeout(opts_.timeout_s, 0);
        cli.set_read_timeout(opts_.timeout_s, 0);
        httplib::Headers headers;
        if (!opts_.auth_env.empty()) {
            if (const char* token = std::getenv(opts_.auth_env.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + token);
        }
        auto res = cli.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const std::exception& e) {
            last_error = std::string("bad response body: ") + e.what();
        }
    }
    throw BackendTimeout("remote backend: region " + region.id + ": " + last_error);
}

RecognizedElement recognize(const Region& region, const std::string& image_bytes,
                            const ResizePlan& plan, RecognizerBackend& backend,
                            const RecognizerOptions& opts) {
    auto task = task_for(region.category);
    if (!task)
        throw UnroutableCategory("recognize: category " + to_string(region.category) +
                                 " has no recognizer");
    if (region.bbox.empty()) throw DegenerateRegion("recognize: region " + region.id);

    RecognizedElement out;
    out.region = region;
    out.task = *task;
    std::string raw = backend.run(*task, build_prompt(*task, opts), image_bytes, plan, region);
    out.payload = normalize_payload(*task, raw, opts.otsl_interleaved);
    out.diagnostics = validate_payload(*task, out.payload, opts.otsl_interleaved);
    out.valid = out.diagnostics.empty();
    return out;
}

std::vector<RecognizedElement> recognize_batch(const std::vector<BatchItem>& items,
                                               RecognizerBackend& backend,
                                               const RecognizerOptions& opts) {
    std::vector<RecognizedElement> results(items.size());
    if (items.empty()) return results;

    std::atomic<size_t> next{0};
    std::atomic<size_t> transport_failures{0};
    const int workers = std::max(1, std::min<int>(opts.max_in_flight,
                                                  static_cast<int>(items.size())));
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            const auto& item = items[i];
            try {
                results[i] = recognize(item.region, item.image_bytes, item.plan, backend, opts);
            } catch (const BackendTimeout& e) {
                transport_failures.fetch_add(1);
                results[i].region = item.region;
                if (auto t = task_for(item.region.category)) results[i].task = *t;
                results[i].valid = false;
                results[i].diagnostics = {e.what()};
            } catch (const Error& e) {
                results[i].region = item.region;
                if (auto t = task_for(item.region.category)) results[i].task = *t;
                results[i].valid = false;
                results[i].diagnostics = {e.what()};
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (transport_failures.load() == items.size())
        throw BackendTimeout("recognize_batch: every element failed with a transport error");
    return results;
}

}  // namespace docparse
