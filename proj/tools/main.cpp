#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "docparse/bench.hpp"
#include "docparse/errors.hpp"

using namespace docparse;

namespace {

struct Overrides {
    std::string config;
    std::string tier, layout, recognizer, dataset, out, report;
    int jobs = -1;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--tier", o.tier, "resolution tier: S, M, or L")
        ->check(CLI::IsMember({"S", "M", "L"}));
    cmd->add_option("--layout", o.layout, "layout source: gt, matrix, or remote")
        ->check(CLI::IsMember({"gt", "matrix", "remote"}));
    cmd->add_option("--recognizer", o.recognizer, "recognizer backend: mock or remote")
        ->check(CLI::IsMember({"mock", "remote"}));
    cmd->add_option("--jobs", o.jobs, "page-level worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--dataset", o.dataset, "JSONL dataset path");
    cmd->add_option("--out", o.out, "output directory for per-page files");
    cmd->add_option("--report", o.report, "report output path");
}

RunConfig build_config(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.tier.empty()) cfg.tier = Tier::from_name(o.tier);
    if (!o.layout.empty()) cfg.layout = layout_source_from_string(o.layout);
    if (!o.recognizer.empty())
        cfg.recognizer = o.recognizer == "remote" ? BackendKind::Remote : BackendKind::Mock;
    if (o.jobs > 0) cfg.jobs = o.jobs;
    if (!o.dataset.empty()) cfg.dataset_path = o.dataset;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (!o.report.empty()) cfg.report_path = o.report;
    if (cfg.dataset_path.empty()) throw ConfigError("no dataset given (--dataset or config)");
    return cfg;
}

void print_failures(const std::vector<PageFailure>& failures) {
    for (const auto& f : failures)
        std::fprintf(stderr, "page %s failed: %s\n", f.page_id.c_str(), f.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"document parsing bench"};
    app.require_subcommand(1);

    Overrides po, eo, to;
    CLI::App* parse = app.add_subcommand("parse", "run the pipeline and emit per-page outputs");
    add_common(parse, po);
    CLI::App* eval = app.add_subcommand("eval", "run the pipeline and score against ground truth");
    add_common(eval, eo);
    CLI::App* tokens = app.add_subcommand("tokens", "per-page vision-token counts per tier");
    add_common(tokens, to);

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse->parsed()) {
            RunConfig cfg = build_config(po);
            ParseOutcome out = cmd_parse(cfg);
            std::fputs(out.report.to_json().c_str(), stdout);
            print_failures(out.failures);
            return out.failures.empty() ? 0 : 1;
        }
        if (eval->parsed()) {
            RunConfig cfg = build_config(eo);
            EvalOutcome out = cmd_eval(cfg);
            std::fputs(out.report.to_markdown().c_str(), stdout);
            print_failures(out.failures);
            return out.failures.empty() ? 0 : 1;
        }
        RunConfig cfg = build_config(to);
        TokensOutcome out = cmd_tokens(cfg);
        std::fputs(out.to_markdown().c_str(), stdout);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DatasetError& e) {
        std::fprintf(stderr, "dataset error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
