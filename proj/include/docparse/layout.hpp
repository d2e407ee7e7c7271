#pragma once

#include <string>
#include <vector>

#include "docparse/doc_model.hpp"
#include "docparse/reading_order.hpp"
#include "docparse/recognize.hpp"

namespace docparse {

enum class LayoutSource { GroundTruth, MatrixReplay, RemoteDetector };

LayoutSource layout_source_from_string(const std::string& s);  // gt|matrix|remote
std::string to_string(LayoutSource s);

struct LayoutResult {
    std::vector<Region> regions;
    ReadingOrder order;  // permutation of region indices
    LayoutSource source = LayoutSource::GroundTruth;
};

struct LayoutOptions {
    double dedup_iou = 0.9;
    double min_score = 0.3;       // remote detections below this are dropped
    double column_overlap = 0.5;  // geometric_order clustering
    RemoteOptions remote;
};

/// Greedy duplicate suppression: regions visited in descending area; a
/// region is dropped when its IoU with a kept same-category region strictly
/// exceeds the threshold. Survivors keep their input order.
std::vector<Region> suppress_duplicates(const std::vector<Region>& regions,
                                        double iou_threshold);

/// Coarse stage: regions plus a reading order for one page.
///   GroundTruth   - annotated regions; gt_order when present, else geometry.
///   MatrixReplay  - decode the page's replayed order matrix.
///   RemoteDetector- HTTP detector; matrix when returned, else geometry.
LayoutResult analyze(const Page& page, LayoutSource source, const LayoutOptions& opts = {});

}  // namespace docparse
