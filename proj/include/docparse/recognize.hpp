#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "docparse/doc_model.hpp"
#include "docparse/resolution.hpp"

namespace docparse {

enum class RecognitionTask { Ocr, TableOtsl, FormulaLatex, ChartTable };

std::string to_string(RecognitionTask t);

/// Text/Title -> Ocr, Table -> TableOtsl, Formula -> FormulaLatex,
/// Chart -> ChartTable; Figure and Other produce no task.
std::optional<RecognitionTask> task_for(ElementCategory category);

struct RecognizedElement {
    Region region;
    RecognitionTask task = RecognitionTask::Ocr;
    std::string payload;
    bool valid = true;
    std::vector<std::string> diagnostics;
};

struct RemoteOptions {
    std::string endpoint;       // e.g. http://localhost:8000
    std::string model = "paddleocr-vl";
    std::string auth_env;       // name of env var holding the bearer token
    int timeout_s = 30;
    int retries = 2;
    double backoff_base_s = 0.5;
    int max_tokens = 2048;
};

struct RecognizerOptions {
    bool otsl_interleaved = true;
    int max_in_flight = 8;
    std::map<RecognitionTask, std::string> prompts;  // overrides for build_prompt
};

/// Fixed per-task instruction string; stable across runs for cache keying.
std::string build_prompt(RecognitionTask task, const RecognizerOptions& opts = {});

/// Total, idempotent per-task canonicalization. Validity is judged
/// separately; unparseable input comes back trimmed but otherwise intact.
std::string normalize_payload(RecognitionTask task, const std::string& raw,
                              bool otsl_interleaved = true);

/// Task validator used to set RecognizedElement::valid; returns diagnostics
/// (empty means valid).
std::vector<std::string> validate_payload(RecognitionTask task, const std::string& payload,
                                          bool otsl_interleaved = true);

class RecognizerBackend {
  public:
    virtual ~RecognizerBackend() = default;
    virtual std::string id() const = 0;
    /// Raw model output for one region; throws on transport failure.
    virtual std::string run(RecognitionTask task, const std::string& prompt,
                            const std::string& image_bytes, const ResizePlan& plan,
                            const Region& region) = 0;
};

/// Deterministic backend returning the region's ground-truth payload.
class MockBackend : public RecognizerBackend {
  public:
    std::string id() const override { return "mock"; }
    std::string run(RecognitionTask task, const std::string& prompt,
                    const std::string& image_bytes, const ResizePlan& plan,
                    const Region& region) override;
};

/// Chat-completions-style HTTP client (one image part plus one text part),
/// temperature 0, bounded retries with exponential backoff.
class RemoteBackend : public RecognizerBackend {
  public:
    explicit RemoteBackend(RemoteOptions opts) : opts_(std::move(opts)) {}
    std::string id() const override { return "remote:" + opts_.endpoint + ":" + opts_.model; }
    std::string run(RecognitionTask task, const std::string& prompt,
                    const std::string& image_bytes, const ResizePlan& plan,
                    const Region& region) override;

  private:
    RemoteOptions opts_;
};

RecognizedElement recognize(const Region& region, const std::string& image_bytes,
                            const ResizePlan& plan, RecognizerBackend& backend,
                            const RecognizerOptions& opts = {});

struct BatchItem {
    Region region;
    std::string image_bytes;
    ResizePlan plan;
};

/// Results in input order; per-element failures become valid=false elements.
/// At most opts.max_in_flight requests run concurrently. Throws only when
/// every element fails with a transport error.
std::vector<RecognizedElement> recognize_batch(const std::vector<BatchItem>& items,
                                               RecognizerBackend& backend,
                                               const RecognizerOptions& opts = {});

std::string base64_encode(const std::string& bytes);

}  // namespace docparse
