#include "docparse/layout.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "docparse/errors.hpp"

namespace docparse {

LayoutSource layout_source_from_string(const std::string& s) {
    if (s == "gt") return LayoutSource::GroundTruth;
    if (s == "matrix") return LayoutSource::MatrixReplay;
    if (s == "remote") return LayoutSource::RemoteDetector;
    throw ConfigError("unknown layout source: " + s);
}

std::string to_string(LayoutSource s) {
    switch (s) {
        case LayoutSource::GroundTruth: return "gt";
        case LayoutSource::MatrixReplay: return "matrix";
        case LayoutSource::RemoteDetector: return "remote";
    }
    return "gt";
}

namespace {

// Greedy keep flags: visit in descending area (stable on ties), drop on
// IoU strictly above threshold against a kept same-category region.
std::vector<bool> dedup_flags(const std::vector<Region>& regions, double iou_threshold) {
    if (iou_threshold <= 0.0 || iou_threshold > 1.0)
        throw ConfigError("suppress_duplicates: threshold must be in (0,1]");
    std::vector<size_t> by_area(regions.size());
    std::iota(by_area.begin(), by_area.end(), 0);
    std::stable_sort(by_area.begin(), by_area.end(), [&](size_t a, size_t b) {
        return regions[a].bbox.area() > regions[b].bbox.area();
    });
    std::vector<bool> keep(regions.size(), false);
    std::vector<size_t> kept;
    for (size_t idx : by_area) {
        bool dup = false;
        for (size_t k : kept) {
            if (regions[k].category != regions[idx].category) continue;
            if (iou(regions[k].bbox, regions[idx].bbox) > iou_threshold) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            keep[idx] = true;
            kept.push_back(idx);
        }
    }
    return keep;
}

}  // namespace

std::vector<Region> suppress_duplicates(const std::vector<Region>& regions,
                                        double iou_threshold) {
    auto keep = dedup_flags(regions, iou_threshold);
    std::vector<Region> out;
    for (size_t i = 0; i < regions.size(); ++i)
        if (keep[i]) out.push_back(regions[i]);
    return out;
}

namespace {

std::vector<BBox> boxes_of(const std::vector<Region>& regions) {
    std::vector<BBox> out;
    out.reserve(regions.size());
    for (const auto& r : regions) out.push_back(r.bbox);
    return out;
}

// Keeps the matrix aligned with the surviving subset of its region list.
PairwiseOrderMatrix submatrix(const std::vector<std::vector<double>>& scores,
                              const std::vector<size_t>& survivors) {
    auto m = PairwiseOrderMatrix::zeros(survivors.size());
    for (size_t a = 0; a < survivors.size(); ++a)
        for (size_t b = 0; b < survivors.size(); ++b)
            if (a != b) m.scores[a][b] = scores[survivors[a]][survivors[b]];
    return m;
}

struct Filtered {
    std::vector<Region> regions;
    std::vector<size_t> original_index;
};

Filtered clamp_and_dedup(const std::vector<Region>& input, const Page& page, double dedup_iou) {
    std::vector<Region> clamped;
    std::vector<size_t> clamped_src;
    for (size_t i = 0; i < input.size(); ++i) {
        if (auto r = clamp_region(input[i], page)) {
            clamped.push_back(*r);
            clamped_src.push_back(i);
        }
    }
    auto keep = dedup_flags(clamped, dedup_iou);
    Filtered out;
    for (size_t i = 0; i < clamped.size(); ++i) {
        if (!keep[i]) continue;
        out.regions.push_back(clamped[i]);
        out.original_index.push_back(clamped_src[i]);
    }
    return out;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

LayoutResult analyze(const Page& page, LayoutSource source, const LayoutOptions& opts) {
    LayoutResult result;
    result.source = source;

    switch (source) {
        case LayoutSource::GroundTruth: {
            Filtered f = clamp_and_dedup(page.regions, page, opts.dedup_iou);
            result.regions = f.regions;
            bool all_ordered = !f.regions.empty() &&
                               std::all_of(f.regions.begin(), f.regions.end(),
                                           [](const Region& r) { return r.gt_order.has_value(); });
            if (all_ordered) {
                result.order.resize(f.regions.size());
                std::iota(result.order.begin(), result.order.end(), 0);
                std::sort(result.order.begin(), result.order.end(), [&](int a, int b) {
                    return *f.regions[a].gt_order < *f.regions[b].gt_order;
                });
            } else {
                result.order = geometric_order(boxes_of(f.regions), opts.column_overlap);
            }
            break;
        }
        case LayoutSource::MatrixReplay: {
            if (!page.order_matrix)
                throw MatrixShapeMismatch("analyze: matrix replay requested but the page "
                                          "carries no order_matrix");
            const auto& scores = *page.order_matrix;
            if (scores.size() != page.regions.size())
                throw MatrixShapeMismatch("analyze: order_matrix is " +
                                          std::to_string(scores.size()) + "x? for " +
                                          std::to_string(page.regions.size()) + " regions");
            for (const auto& row : scores)
                if (row.size() != scores.size())
                    throw MatrixShapeMismatch("analyze: order_matrix is ragged");
            Filtered f = clamp_and_dedup(page.regions, page, opts.dedup_iou);
            result.regions = f.regions;
            result.order = decode_order(submatrix(scores, f.original_index),
                                        boxes_of(f.regions));
            break;
        }
        case LayoutSource::RemoteDetector: {
            if (opts.remote.endpoint.empty())
                throw ConfigError("analyze: remote detector requires an endpoint");
            nlohmann::json body;
            std::string image;
            if (page.image_path) image = read_file_bytes(*page.image_path);
            body["image"] = base64_encode(image);
            body["width"] = static_cast<int>(page.width);
            body["height"] = static_cast<int>(page.height);

            nlohmann::json resp;
            std::string last_error;
            bool got = false;
            for (int attempt = 0; attempt <= opts.remote.retries && !got; ++attempt) {
                httplib::Client cli(opts.remote.endpoint);
                cli.set_connection_timeout(opts.remote.timeout_s, 0);
                cli.set_read_timeout(opts.remote.timeout_s, 0);
                auto res = cli.Post("/detect", body.dump(), "application/json");
                if (!res) {
                    last_error = "transport error: " + httplib::to_string(res.error());
                    continue;
                }
                if (res->status != 200) {
                    last_error = "http status " + std::to_string(res->status);
                    continue;
                }
                try {
                    resp = nlohmann::json::parse(res->body);
                    got = true;
                } catch (const std::exception& e) {
                    last_error = std::string("bad response: ") + e.what();
                }
            }
            if (!got) throw DetectorUnavailable("analyze: " + last_error);

            // Region ids carry the response index; the optional order_matrix
            // is indexed over the full response, before score filtering.
            size_t responses = 0;
            std::vector<Region> detected;
            std::vector<size_t> resp_index;
            for (const auto& jr : resp.value("regions", nlohmann::json::array())) {
                size_t idx = responses++;
                double score = jr.value("score", 1.0);
                if (score < opts.min_score) continue;
                Region r;
                r.id = "det-" + std::to_string(idx);
                auto bb = jr.at("bbox");
                r.bbox = {bb.at(0).get<double>(), bb.at(1).get<double>(),
                          bb.at(2).get<double>(), bb.at(3).get<double>()};
                r.category = category_from_string(jr.value("category", "other"));
                detected.push_back(std::move(r));
                resp_index.push_back(idx);
            }
            Filtered f = clamp_and_dedup(detected, page, opts.dedup_iou);
            result.regions = f.regions;
            if (resp.contains("order_matrix")) {
                auto scores = resp["order_matrix"].get<std::vector<std::vector<double>>>();
                if (scores.size() != responses)
                    throw MatrixShapeMismatch("analyze: detector order_matrix is " +
                                              std::to_string(scores.size()) + "x? for " +
                                              std::to_string(responses) + " detections");
                for (const auto& row : scores)
                    if (row.size() != responses)
                        throw MatrixShapeMismatch("analyze: detector order_matrix is ragged");
                std::vector<size_t> survivors;
                for (size_t i : f.original_index) survivors.push_back(resp_index[i]);
                result.order = decode_order(submatrix(scores, survivors), boxes_of(f.regions));
            } else {
                result.order = geometric_order(boxes_of(f.regions), opts.column_overlap);
            }
            break;
        }
    }
    return result;
}

}  // namespace docparse
