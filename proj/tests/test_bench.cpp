#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "docparse/bench.hpp"
#include "docparse/errors.hpp"

using namespace docparse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("docparse-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name, const std::string& content) {
        auto p = path / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string read(const std::string& name) const {
        std::ifstream in(path / name, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    }
};

nlohmann::json gt_region(const std::string& id, double y, const std::string& category,
                         const std::string& content, int order) {
    return {{"id", id},
            {"bbox", {0.0, y, 500.0, y + 80}},
            {"category", category},
            {"content", content},
            {"order", order}};
}

std::string identity_page(const std::string& id) {
    nlohmann::json j;
    j["id"] = id;
    j["width"] = 1000;
    j["height"] = 1200;
    j["regions"] = {
        gt_region(id + "-t", 0, "title", "Heading", 0),
        gt_region(id + "-p", 100, "text", "Some body text.", 1),
        gt_region(id + "-f", 200, "formula", "\\[x+y\\]", 2),
        gt_region(id + "-tab", 300, "table", "fcel \"a\" fcel \"b\" nl", 3),
        gt_region(id + "-c", 400, "chart", "| k | v |\n| --- | --- |\n| a | 1 |", 4),
    };
    return j.dump();
}

}  // namespace

TEST_CASE("page_from_json_line") {
    auto page = page_from_json_line(
        R"({"image":"p.png","width":100,"height":200,"unknown":1,)"
        R"("regions":[{"id":"a","bbox":[1,2,3,4],"category":"text","extra":true}]})");
    CHECK(page.width == 100);
    CHECK(*page.image_path == "p.png");
    REQUIRE(page.regions.size() == 1);
    CHECK(page.regions[0].bbox == BBox{1, 2, 3, 4});
    CHECK_FALSE(page.regions[0].gt_content);
    CHECK_FALSE(page.order_matrix);

    CHECK_THROWS_AS(page_from_json_line("{\"width\":100"), DatasetError);  // truncated
    CHECK_THROWS_AS(page_from_json_line("[1,2]"), DatasetError);
    CHECK_THROWS_AS(page_from_json_line("{\"width\":0,\"height\":5}"), DatasetError);
    CHECK_THROWS_AS(
        page_from_json_line(R"({"width":9,"height":9,"regions":[{"bbox":[1,2]}]})"),
        DatasetError);
}

TEST_CASE("load_dataset streams with line-numbered diagnostics") {
    TempDir tmp;
    auto path = tmp.file("data.jsonl", identity_page("p1") + "\n\n" + identity_page("p2") + "\n");
    std::vector<size_t> lines;
    auto stats = load_dataset(path, [&](Page&&, size_t line) { lines.push_back(line); });
    CHECK(stats.pages == 2);
    CHECK(stats.malformed_lines == 0);
    CHECK(lines == std::vector<size_t>{1, 3});

    auto bad = tmp.file("bad.jsonl", identity_page("p1") + "\n{\"width\": \n");
    CHECK_THROWS_AS(load_dataset(bad, [](Page&&, size_t) {}), DatasetError);
    auto stats2 = load_dataset(bad, [](Page&&, size_t) {}, 0.6);
    CHECK(stats2.pages == 1);
    CHECK(stats2.malformed_lines == 1);
    REQUIRE(stats2.diagnostics.size() == 1);
    CHECK(stats2.diagnostics[0].find("line 2") == 0);

    CHECK_THROWS_AS(load_dataset(tmp.path / "missing.jsonl", [](Page&&, size_t) {}), DatasetError);
}

TEST_CASE("load_config") {
    TempDir tmp;
    auto path = tmp.file("cfg.json", R"({"tier":"m","layout":"matrix","recognizer":"mock",
        "jobs":4,"dataset":"d.jsonl","out_dir":"out","report":"r.json",
        "merge_factor":4,"dedup_iou":0.8,"endpoint":"http://x","max_in_flight":2})");
    auto cfg = load_config(path);
    CHECK(cfg.tier.name == "M");
    CHECK(cfg.layout == LayoutSource::MatrixReplay);
    CHECK(cfg.recognizer == BackendKind::Mock);
    CHECK(cfg.jobs == 4);
    CHECK(cfg.merge_factor == 4);
    CHECK(cfg.layout_opts.dedup_iou == 0.8);
    CHECK(cfg.remote.endpoint == "http://x");
    CHECK(cfg.recognizer_opts.max_in_flight == 2);

    CHECK_THROWS_AS(load_config(tmp.file("bad.json", "{nope")), ConfigError);
    CHECK_THROWS_AS(load_config(tmp.file("bad2.json", R"({"jobs":0})")), ConfigError);
    CHECK_THROWS_AS(load_config(tmp.file("bad3.json", R"({"tier":"q"})")), ConfigError);
    CHECK_THROWS_AS(load_config((tmp.path / "none.json").string()), ConfigError);
    // Custom tier budgets must stay on the patch grid.
    CHECK_THROWS_AS(load_config(tmp.file("bad4.json", R"({"max_pixels":1000})")), ConfigError);
    auto custom = load_config(tmp.file("ok.json", R"({"max_pixels":156800})"));
    CHECK(custom.tier.max_pixels == 156800);
}

TEST_CASE("cmd_parse writes per-page outputs and a consistent report") {
    TempDir tmp;
    std::string data;
    for (int i = 0; i < 3; ++i) data += identity_page("p" + std::to_string(i)) + "\n";
    RunConfig cfg;
    cfg.dataset_path = tmp.file("d.jsonl", data);
    cfg.out_dir = (tmp.path / "out").string();
    cfg.report_path = (tmp.path / "report.json").string();

    auto outcome = cmd_parse(cfg);
    CHECK(outcome.failures.empty());
    CHECK(outcome.report.pages == 3);
    for (int i = 0; i < 3; ++i) {
        std::string md = tmp.read("out/p" + std::to_string(i) + ".md");
        CHECK(md.find("# Heading") == 0);
        auto j = nlohmann::json::parse(tmp.read("out/p" + std::to_string(i) + ".json"));
        CHECK(j["elements"].size() == 5);
    }
    auto rep = nlohmann::json::parse(tmp.read("report.json"));
    CHECK(rep["pages"] == 3);
    double t = rep["total_time_s"].get<double>();
    if (t > 0) {
        CHECK(rep["pages_per_s"].get<double>() * t == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(rep["tokens_per_s"].get<double>() * t ==
              doctest::Approx(rep["tokens_total"].get<double>()).epsilon(1e-9));
    }
    CHECK(rep["tokens_total"].get<int64_t>() > 0);

    // Empty dataset: zero pages, zero rates, no failure.
    RunConfig empty = cfg;
    empty.dataset_path = tmp.file("empty.jsonl", "");
    empty.report_path.clear();
    auto eo = cmd_parse(empty);
    CHECK(eo.report.pages == 0);
    CHECK(eo.report.pages_per_s == 0.0);
    CHECK(eo.failures.empty());
}

TEST_CASE("cmd_eval identity run is all-perfect") {
    TempDir tmp;
    std::string data;
    for (int i = 0; i < 4; ++i) data += identity_page("p" + std::to_string(i)) + "\n";
    RunConfig cfg;
    cfg.dataset_path = tmp.file("d.jsonl", data);
    cfg.report_path = (tmp.path / "eval.json").string();

    auto outcome = cmd_eval(cfg);
    CHECK(outcome.failures.empty());
    REQUIRE(outcome.rows.size() == 4);
    CHECK(outcome.rows[0].page_id == "p0");
    CHECK(*outcome.report.text_edit == 0.0);
    CHECK(*outcome.report.formula == 1.0);
    CHECK(*outcome.report.table_teds == 1.0);
    CHECK(*outcome.report.table_teds_s == 1.0);
    CHECK(*outcome.report.chart_rms_f1 == 1.0);
    CHECK(*outcome.report.order_edit == 0.0);
    CHECK(*outcome.report.overall == 100.0);

    CHECK(nlohmann::json::parse(tmp.read("eval.json"))["overall"] == 100.0);
    CHECK(tmp.read("eval.json.md").find("| Overall |") == 0);
    auto rows = tmp.read("eval.json.pages.jsonl");
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 4);
}

TEST_CASE("cmd_eval flags missing ground truth and continues") {
    TempDir tmp;
    nlohmann::json no_gt;
    no_gt["id"] = "nogt";
    no_gt["width"] = 1000;
    no_gt["height"] = 1000;
    no_gt["regions"] = {{{"id", "r"}, {"bbox", {0, 0, 100, 100}}, {"category", "text"}}};
    RunConfig cfg;
    cfg.dataset_path = tmp.file("d.jsonl", identity_page("ok") + "\n" + no_gt.dump() + "\n");
    auto outcome = cmd_eval(cfg);
    REQUIRE(outcome.rows.size() == 2);
    CHECK_FALSE(outcome.rows[0].missing_gt);
    CHECK(outcome.rows[1].missing_gt);
    CHECK(outcome.report.pages == 1);
    CHECK(outcome.report.pages_skipped == 1);
    CHECK(*outcome.report.overall == 100.0);
}

TEST_CASE("cmd_tokens per-tier accounting") {
    TempDir tmp;
    nlohmann::json j;
    j["width"] = 500;
    j["height"] = 500;
    j["regions"] = {{{"id", "r"}, {"bbox", {0, 0, 56, 56}}, {"category", "figure"}}};
    RunConfig cfg;
    cfg.dataset_path = tmp.file("d.jsonl", j.dump() + "\n");
    cfg.report_path = (tmp.path / "tokens.md").string();
    auto out = cmd_tokens(cfg);
    REQUIRE(out.rows.size() == 1);
    CHECK(out.rows[0].tokens_s == 4);
    CHECK(out.rows[0].tokens_m == 4);
    CHECK(out.rows[0].tokens_l == 4);
    CHECK(out.mean_s == 4.0);
    CHECK(tmp.read("tokens.md").find("| Page | Tokens-S | Tokens-M | Tokens-L |") == 0);

    // Random pages: S <= M <= L per page.
    std::string data;
    std::mt19937 rng(53);
    std::uniform_int_distribution<int> side(10, 4000);
    for (int p = 0; p < 10; ++p) {
        nlohmann::json pg;
        pg["width"] = 5000;
        pg["height"] = 5000;
        pg["regions"] = nlohmann::json::array();
        for (int r = 0; r < 5; ++r) {
            double w = side(rng), h = side(rng);
            pg["regions"].push_back(
                {{"id", "r" + std::to_string(r)}, {"bbox", {0, 0, w, h}}, {"category", "text"}});
        }
        data += pg.dump() + "\n";
    }
    RunConfig rnd;
    rnd.dataset_path = tmp.file("rand.jsonl", data);
    auto ro = cmd_tokens(rnd);
    for (const auto& row : ro.rows) {
        CHECK(row.tokens_s <= row.tokens_m);
        CHECK(row.tokens_m <= row.tokens_l);
    }
}

TEST_CASE("worker-count invariance with mock backend") {
    TempDir tmp;
    std::string data;
    for (int i = 0; i < 6; ++i) data += identity_page("p" + std::to_string(i)) + "\n";
    auto dataset = tmp.file("d.jsonl", data);

    RunConfig one;
    one.dataset_path = dataset;
    one.out_dir = (tmp.path / "out1").string();
    one.jobs = 1;
    RunConfig four = one;
    four.out_dir = (tmp.path / "out4").string();
    four.jobs = 4;
    cmd_parse(one);
    cmd_parse(four);
    for (int i = 0; i < 6; ++i) {
        std::string name = "p" + std::to_string(i);
        CHECK(tmp.read("out1/" + name + ".md") == tmp.read("out4/" + name + ".md"));
        CHECK(tmp.read("out1/" + name + ".json") == tmp.read("out4/" + name + ".json"));
    }
}

TEST_CASE("throughput report arithmetic") {
    auto r = make_throughput_report(980, 0, 605.2);
    CHECK(r.pages_per_s == doctest::Approx(980.0 / 605.2).epsilon(1e-12));
    // Table-5-style 4-decimal truncation of 980/605.2.
    CHECK(std::floor(r.pages_per_s * 10000) / 10000 == doctest::Approx(1.6192));
    CHECK(r.pages_per_s * r.total_time_s == doctest::Approx(980.0).epsilon(1e-9));
    auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["pages"] == 980);
}
