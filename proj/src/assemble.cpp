#include "docparse/assemble.hpp"

#include <map>

#include <json.hpp>

#include "docparse/errors.hpp"
#include "docparse/otsl.hpp"

namespace docparse {

namespace {

std::string join_diagnostics(const std::vector<std::string>& diags) {
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out += "; ";
        out += d;
    }
    return out;
}

std::string render_block(const Region& region, const RecognizedElement* rec,
                         bool otsl_interleaved) {
    if (region.category == ElementCategory::Figure)
        return "![](#region-" + region.id + ")";

    std::string block;
    if (!rec->valid)
        block = "<!-- invalid: " + join_diagnostics(rec->diagnostics) + " -->\n";
    switch (region.category) {
        case ElementCategory::Title:
            block += "# " + rec->payload;
            break;
        case ElementCategory::Table:
            if (rec->valid) {
                block += grid_to_html(otsl_to_grid(parse_otsl(rec->payload, otsl_interleaved)));
            } else {
                block += rec->payload;  // best effort
            }
            break;
        default:
            block += rec->payload;
            break;
    }
    return block;
}

}  // namespace

AssembledPage assemble(const LayoutResult& layout,
                       const std::vector<RecognizedElement>& recognized,
                       bool otsl_interleaved) {
    std::map<std::string, const RecognizedElement*> by_id;
    for (const auto& r : recognized) {
        if (!by_id.emplace(r.region.id, &r).second)
            throw CoverageMismatch("assemble: duplicate recognized region id " + r.region.id);
    }
    size_t routable = 0;
    for (const auto& region : layout.regions) {
        if (!task_for(region.category)) continue;
        routable++;
        if (!by_id.count(region.id))
            throw CoverageMismatch("assemble: region " + region.id + " has no recognized element");
    }
    if (routable != recognized.size())
        throw CoverageMismatch("assemble: " + std::to_string(recognized.size()) +
                               " recognized elements for " + std::to_string(routable) +
                               " routable regions");

    AssembledPage page;
    page.order = layout.order;
    std::vector<std::string> blocks;
    for (int idx : layout.order) {
        const Region& region = layout.regions[idx];
        if (region.category == ElementCategory::Other) continue;  // never rendered

        AssembledElement el;
        el.id = region.id;
        el.category = region.category;
        if (region.category == ElementCategory::Figure) {
            el.payload = "![](#region-" + region.id + ")";
            el.valid = true;
            blocks.push_back(el.payload);
        } else {
            const RecognizedElement* rec = by_id.at(region.id);
            el.payload = rec->payload;
            el.valid = rec->valid;
            blocks.push_back(render_block(region, rec, otsl_interleaved));
        }
        page.elements.push_back(std::move(el));
    }

    std::string markdown;
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (i) markdown += "\n\n";
        markdown += blocks[i];
    }
    page.markdown = markdown;
    return page;
}

std::string to_json(const AssembledPage& page) {
    nlohmann::json j;
    j["markdown"] = page.markdown;
    j["order"] = page.order;
    auto elements = nlohmann::json::array();
    for (const auto& el : page.elements) {
        nlohmann::json e;
        e["id"] = el.id;
        e["category"] = to_string(el.category);
        e["payload"] = el.payload;
        e["valid"] = el.valid;
        elements.push_back(e);
    }
    j["elements"] = elements;
    return j.dump(2) + "\n";
}

}  // namespace docparse
