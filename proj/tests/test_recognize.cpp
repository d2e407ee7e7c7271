#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "docparse/errors.hpp"
#include "docparse/recognize.hpp"

using namespace docparse;

namespace {

Region make_region(const std::string& id, ElementCategory cat, const std::string& gt) {
    Region r;
    r.id = id;
    r.bbox = {0, 0, 100, 100};
    r.category = cat;
    r.gt_content = gt;
    return r;
}

ResizePlan any_plan() { return plan_resize(100, 100, Tier::L()); }

// Chat-completions echo server for exercising the remote client.
struct TestServer {
    httplib::Server svr;
    std::thread thread;
    int port = 0;
    std::atomic<int> active{0};
    std::atomic<int> max_active{0};
    std::atomic<int> requests{0};
    std::string seen_auth;

    explicit TestServer(int fail_status = 0, const std::string& fail_marker = "") {
        svr.Post("/v1/chat/completions", [&, fail_status, fail_marker](const httplib::Request& req,
                                                                       httplib::Response& res) {
            requests++;
            int now = ++active;
            int prev = max_active.load();
            while (now > prev && !max_active.compare_exchange_weak(prev, now)) {
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            if (req.has_header("Authorization")) seen_auth = req.get_header_value("Authorization");
            auto body = nlohmann::json::parse(req.body);
            std::string url =
                body["messages"][0]["content"][0]["image_url"]["url"].get<std::string>();
            if (!fail_marker.empty() && url.find(fail_marker) != std::string::npos) {
                res.status = fail_status;
                active--;
                return;
            }
            nlohmann::json out;
            out["choices"] = {{{"message", {{"content", "echo:" + url.substr(url.rfind(',') + 1)}}}}};
            res.set_content(out.dump(), "application/json");
            active--;
        });
        port = svr.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { svr.listen_after_bind(); });
        svr.wait_until_ready();
    }

    ~TestServer() {
        svr.stop();
        thread.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("task routing") {
    CHECK(*task_for(ElementCategory::Text) == RecognitionTask::Ocr);
    CHECK(*task_for(ElementCategory::Title) == RecognitionTask::Ocr);
    CHECK(*task_for(ElementCategory::Table) == RecognitionTask::TableOtsl);
    CHECK(*task_for(ElementCategory::Formula) == RecognitionTask::FormulaLatex);
    CHECK(*task_for(ElementCategory::Chart) == RecognitionTask::ChartTable);
    CHECK_FALSE(task_for(ElementCategory::Figure));
    CHECK_FALSE(task_for(ElementCategory::Other));
}

TEST_CASE("normalize_payload per task") {
    CHECK(normalize_payload(RecognitionTask::Ocr, "a \r\nb ") == "a\nb");
    CHECK(normalize_payload(RecognitionTask::Ocr, "x\n\n\n") == "x");
    CHECK(normalize_payload(RecognitionTask::FormulaLatex, "\\[\\[x\\]\\]") == "\\[x\\]");
    CHECK(normalize_payload(RecognitionTask::FormulaLatex, "E=mc^2") == "\\[E=mc^2\\]");
    CHECK(normalize_payload(RecognitionTask::FormulaLatex, "\\(x\\)") == "\\(x\\)");
    // Adjacent inline spans are one payload, not a single wrapper.
    CHECK(normalize_payload(RecognitionTask::FormulaLatex, "\\(a\\) \\(b\\)") ==
          "\\[\\(a\\) \\(b\\)\\]");
    CHECK(normalize_payload(RecognitionTask::ChartTable, "|a|b|\n|1|2|") ==
          "| a | b |\n| --- | --- |\n| 1 | 2 |");
    CHECK(normalize_payload(RecognitionTask::TableOtsl, "fcel   \"a\"   nl") == "fcel \"a\" nl");

    // Idempotence for every task.
    for (auto task : {RecognitionTask::Ocr, RecognitionTask::FormulaLatex,
                      RecognitionTask::TableOtsl, RecognitionTask::ChartTable}) {
        for (const std::string raw : {"hello ", "\\[x\\]", "fcel \"v\" nl", "|a|\n|1|", "???"}) {
            auto once = normalize_payload(task, raw);
            CHECK(normalize_payload(task, once) == once);
        }
    }
}

TEST_CASE("build_prompt is fixed and overridable") {
    CHECK(build_prompt(RecognitionTask::TableOtsl).find("OTSL") != std::string::npos);
    CHECK(build_prompt(RecognitionTask::FormulaLatex).find("LaTeX") != std::string::npos);
    CHECK(build_prompt(RecognitionTask::FormulaLatex).find("inline") != std::string::npos);
    CHECK(build_prompt(RecognitionTask::ChartTable).find("Markdown table") != std::string::npos);
    CHECK(build_prompt(RecognitionTask::Ocr) == build_prompt(RecognitionTask::Ocr));
    RecognizerOptions opts;
    opts.prompts[RecognitionTask::Ocr] = "custom";
    CHECK(build_prompt(RecognitionTask::Ocr, opts) == "custom");
}

TEST_CASE("mock recognize") {
    MockBackend mock;
    auto el = recognize(make_region("t", ElementCategory::Text, "Hello"), "", any_plan(), mock);
    CHECK(el.payload == "Hello");
    CHECK(el.valid);

    el = recognize(make_region("f", ElementCategory::Formula, "E=mc^2"), "", any_plan(), mock);
    CHECK(el.payload == "\\[E=mc^2\\]");
    CHECK(el.valid);

    // OTSL ground truth failing validation: invalid, diagnostic names the token.
    el = recognize(make_region("tab", ElementCategory::Table, "ucel nl"), "", any_plan(), mock);
    CHECK_FALSE(el.valid);
    REQUIRE_FALSE(el.diagnostics.empty());
    CHECK(el.diagnostics[0].find("ucel") != std::string::npos);

    Region no_gt = make_region("x", ElementCategory::Text, "");
    no_gt.gt_content.reset();
    CHECK_THROWS_AS(recognize(no_gt, "", any_plan(), mock), MissingGroundTruth);

    CHECK_THROWS_AS(recognize(make_region("fig", ElementCategory::Figure, "z"), "", any_plan(),
                              mock),
                    UnroutableCategory);
    Region degenerate = make_region("d", ElementCategory::Text, "z");
    degenerate.bbox = {5, 5, 5, 5};
    CHECK_THROWS_AS(recognize(degenerate, "", any_plan(), mock), DegenerateRegion);
}

TEST_CASE("recognize_batch with mock") {
    MockBackend mock;
    CHECK(recognize_batch({}, mock).empty());

    std::vector<BatchItem> items;
    for (int i = 0; i < 3; ++i)
        items.push_back({make_region("r" + std::to_string(i), ElementCategory::Text,
                                     "v" + std::to_string(i)),
                         "", any_plan()});
    auto out = recognize_batch(items, mock);
    REQUIRE(out.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(out[i].region.id == "r" + std::to_string(i));
        CHECK(out[i].payload == "v" + std::to_string(i));
        // Batch results match per-element recognize.
        auto single = recognize(items[i].region, "", items[i].plan, mock);
        CHECK(single.payload == out[i].payload);
    }

    // Per-element failure (missing gt) does not abort the batch.
    items[1].region.gt_content.reset();
    out = recognize_batch(items, mock);
    REQUIRE(out.size() == 3);
    CHECK(out[0].valid);
    CHECK_FALSE(out[1].valid);
    CHECK(out[2].valid);
}

TEST_CASE("remote backend round trip and auth") {
    TestServer server;
    RemoteOptions opts;
    opts.endpoint = server.endpoint();
    opts.auth_env = "DOCPARSE_TEST_TOKEN";
    setenv("DOCPARSE_TEST_TOKEN", "sekrit", 1);
    RemoteBackend remote(opts);

    auto el = recognize(make_region("t", ElementCategory::Text, ""), "imgbytes", any_plan(),
                        remote);
    CHECK(el.payload == "echo:" + base64_encode("imgbytes"));
    CHECK(server.seen_auth == "Bearer sekrit");
    unsetenv("DOCPARSE_TEST_TOKEN");
}

TEST_CASE("remote batch: one injected failure among five") {
    TestServer server(/*fail_status=*/500, /*fail_marker=*/base64_encode("bad-image"));
    RemoteOptions ropts;
    ropts.endpoint = server.endpoint();
    ropts.retries = 1;
    ropts.backoff_base_s = 0.01;
    RemoteBackend remote(ropts);

    std::vector<BatchItem> items;
    for (int i = 0; i < 5; ++i)
        items.push_back({make_region("r" + std::to_string(i), ElementCategory::Text, ""),
                         i == 2 ? "bad-image" : "ok", any_plan()});
    auto out = recognize_batch(items, remote);
    REQUIRE(out.size() == 5);
    int invalid = 0;
    for (int i = 0; i < 5; ++i) {
        if (!out[i].valid) {
            invalid++;
            CHECK(i == 2);
            REQUIRE_FALSE(out[i].diagnostics.empty());
            CHECK(out[i].diagnostics[0].find("http status 500") != std::string::npos);
        }
    }
    CHECK(invalid == 1);
}

TEST_CASE("remote batch: total transport failure raises") {
    RemoteOptions ropts;
    ropts.endpoint = "http://127.0.0.1:9";  // discard port: nothing listens
    ropts.retries = 0;
    ropts.timeout_s = 1;
    RemoteBackend remote(ropts);
    std::vector<BatchItem> items{{make_region("a", ElementCategory::Text, ""), "", any_plan()},
                                 {make_region("b", ElementCategory::Text, ""), "", any_plan()}};
    CHECK_THROWS_AS(recognize_batch(items, remote), BackendTimeout);
}

TEST_CASE("remote client honors max_in_flight") {
    TestServer server;
    RemoteOptions ropts;
    ropts.endpoint = server.endpoint();
    RemoteBackend remote(ropts);
    RecognizerOptions opts;
    opts.max_in_flight = 3;

    std::vector<BatchItem> items;
    for (int i = 0; i < 12; ++i)
        items.push_back({make_region("r" + std::to_string(i), ElementCategory::Text, ""), "x",
                         any_plan()});
    auto out = recognize_batch(items, remote, opts);
    CHECK(out.size() == 12);
    CHECK(server.requests.load() == 12);
    CHECK(server.max_active.load() <= 3);
}
