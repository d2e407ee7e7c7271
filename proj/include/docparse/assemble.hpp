#pragma once

#include <string>
#include <vector>

#include "docparse/layout.hpp"
#include "docparse/recognize.hpp"

namespace docparse {

struct AssembledElement {
    std::string id;
    ElementCategory category = ElementCategory::Other;
    std::string payload;
    bool valid = true;
};

struct AssembledPage {
    std::string markdown;
    std::vector<AssembledElement> elements;  // in reading order
    ReadingOrder order;
};

/// Merge recognized elements into the final page in reading order.
/// Rendering: Title -> "# " heading, Text -> paragraph, Formula -> payload
/// verbatim, Table -> OTSL converted to embedded HTML, Chart -> pipe table
/// verbatim, Figure -> image placeholder. Blocks are separated by one blank
/// line; invalid elements carry an HTML comment diagnostic before the
/// best-effort payload. Throws CoverageMismatch when `recognized` does not
/// cover exactly the routable regions.
AssembledPage assemble(const LayoutResult& layout,
                       const std::vector<RecognizedElement>& recognized,
                       bool otsl_interleaved = true);

/// Canonical JSON (sorted keys, two-space indent, trailing LF); byte-stable.
std::string to_json(const AssembledPage& page);

}  // namespace docparse
