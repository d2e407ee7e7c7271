#pragma once

#include <optional>
#include <string>
#include <vector>

namespace docparse {

/// Axis-aligned box in pixel coordinates, origin top-left.
struct BBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool empty() const { return x1 <= x0 || y1 <= y0; }

    bool operator==(const BBox&) const = default;
};

BBox intersect(const BBox& a, const BBox& b);
double iou(const BBox& a, const BBox& b);

enum class ElementCategory { Text, Title, Formula, Table, Chart, Figure, Other };

/// Unknown strings map to Other (closed-world routing).
ElementCategory category_from_string(const std::string& s);
std::string to_string(ElementCategory c);

struct Region {
    std::string id;
    BBox bbox;
    ElementCategory category = ElementCategory::Other;
    std::optional<std::string> gt_content;
    std::optional<int> gt_order;
};

struct Page {
    double width = 0, height = 0;
    std::optional<std::string> image_path;
    std::vector<Region> regions;
    // Replayed pairwise reading-order scores, row-major n x n, when present.
    std::optional<std::vector<std::vector<double>>> order_matrix;
};

struct Document {
    std::string source_id;
    std::vector<Page> pages;
};

/// Fraction of the page covered by the union of region boxes.
/// Exact sweep over compressed x-coordinates; overlaps counted once.
double valid_area_ratio(const Page& page);

/// Union area of a set of boxes (exact, rectangle sweep).
double union_area(const std::vector<BBox>& boxes);

/// Intersect the region box with the page bounds. Returns nullopt when the
/// clamped box has zero area (degenerate, to be dropped by the caller).
std::optional<Region> clamp_region(const Region& region, const Page& page);

/// Box to crop for recognition: region expanded by margin, clamped to page.
BBox crop_spec(const Region& region, const Page& page, double margin = 0);

}  // namespace docparse
