#include "docparse/doc_model.hpp"

#include <algorithm>
#include <map>

namespace docparse {

BBox intersect(const BBox& a, const BBox& b) {
    BBox r{std::max(a.x0, b.x0), std::max(a.y0, b.y0),
           std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
    if (r.empty()) return BBox{0, 0, 0, 0};
    return r;
}

double iou(const BBox& a, const BBox& b) {
    double inter = intersect(a, b).area();
    double uni = a.area() + b.area() - inter;
    return uni > 0 ? inter / uni : 0.0;
}

ElementCategory category_from_string(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "text") return ElementCategory::Text;
    if (t == "title") return ElementCategory::Title;
    if (t == "formula") return ElementCategory::Formula;
    if (t == "table") return ElementCategory::Table;
    if (t == "chart") return ElementCategory::Chart;
    if (t == "figure") return ElementCategory::Figure;
    return ElementCategory::Other;
}

std::string to_string(ElementCategory c) {
    switch (c) {
        case ElementCategory::Text: return "text";
        case ElementCategory::Title: return "title";
        case ElementCategory::Formula: return "formula";
        case ElementCategory::Table: return "table";
        case ElementCategory::Chart: return "chart";
        case ElementCategory::Figure: return "figure";
        case ElementCategory::Other: return "other";
    }
    return "other";
}

double union_area(const std::vector<BBox>& boxes) {
    std::vector<double> xs;
    for (const auto& b : boxes) {
        if (b.empty()) continue;
        xs.push_back(b.x0);
        xs.push_back(b.x1);
    }
    if (xs.empty()) return 0.0;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    double total = 0.0;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double lo = xs[i], hi = xs[i + 1];
        double mid = 0.5 * (lo + hi);
        // Union of y-intervals of boxes covering this x-slab.
        std::vector<std::pair<double, double>> ys;
        for (const auto& b : boxes) {
            if (b.empty()) continue;
            if (b.x0 <= mid && mid < b.x1) ys.emplace_back(b.y0, b.y1);
        }
        std::sort(ys.begin(), ys.end());
        double covered = 0.0, cur_lo = 0.0, cur_hi = -1.0;
        bool open = false;
        for (const auto& [a, b2] : ys) {
            if (!open || a > cur_hi) {
                if (open) covered += cur_hi - cur_lo;
                cur_lo = a;
                cur_hi = b2;
                open = true;
            } else {
                cur_hi = std::max(cur_hi, b2);
            }
        }
        if (open) covered += cur_hi - cur_lo;
        total += covered * (hi - lo);
    }
    return total;
}

double valid_area_ratio(const Page& page) {
    if (page.width <= 0 || page.height <= 0) return 0.0;
    std::vector<BBox> boxes;
    boxes.reserve(page.regions.size());
    BBox bounds{0, 0, page.width, page.height};
    for (const auto& r : page.regions) boxes.push_back(intersect(r.bbox, bounds));
    double ratio = union_area(boxes) / (page.width * page.height);
    return std::clamp(ratio, 0.0, 1.0);
}

std::optional<Region> clamp_region(const Region& region, const Page& page) {
    BBox bounds{0, 0, page.width, page.height};
    BBox clamped = intersect(region.bbox, bounds);
    if (clamped.empty()) return std::nullopt;
    Region out = region;
    out.bbox = clamped;
    return out;
}

BBox crop_spec(const Region& region, const Page& page, double margin) {
    BBox b{region.bbox.x0 - margin, region.bbox.y0 - margin,
           region.bbox.x1 + margin, region.bbox.y1 + margin};
    return intersect(b, BBox{0, 0, page.width, page.height});
}

}  // namespace docparse
