#include "docparse/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "docparse/errors.hpp"

namespace docparse {

Tier Tier::from_name(const std::string& name) {
    std::string t;
    for (char c : name) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "s") return S();
    if (t == "m") return M();
    if (t == "l") return L();
    throw ConfigError("unknown tier: " + name);
}

namespace {

struct Candidate {
    int64_t a = 0, b = 0;  // patch counts
};

// Lexicographic preference: smaller L1 distance to the ideal size, then
// larger area, then smaller width.
bool better(const Candidate& lhs, const Candidate& rhs, double iw, double ih) {
    double dl = std::abs(lhs.a * 28.0 - iw) + std::abs(lhs.b * 28.0 - ih);
    double dr = std::abs(rhs.a * 28.0 - iw) + std::abs(rhs.b * 28.0 - ih);
    if (dl != dr) return dl < dr;
    int64_t al = lhs.a * lhs.b, ar = rhs.a * rhs.b;
    if (al != ar) return al > ar;
    return lhs.a < rhs.a;
}

int64_t clamp_patch(int64_t v, int64_t hi) { return std::clamp<int64_t>(v, 1, hi); }

}  // namespace

ResizePlan plan_resize(int64_t src_w, int64_t src_h, const Tier& tier, int merge_factor) {
    if (src_w < 1 || src_h < 1) throw Error("plan_resize: source sides must be >= 1");
    if (merge_factor < 1) throw ConfigError("merge_factor must be >= 1");
    const int64_t minp = tier.min_patches();
    const int64_t maxp = tier.max_patches();
    if (minp < 1 || maxp < minp) throw ConfigError("tier budget invalid: " + tier.name);

    const double area = static_cast<double>(src_w) * static_cast<double>(src_h);
    double scale = 1.0;
    if (area > static_cast<double>(tier.max_pixels))
        scale = std::sqrt(static_cast<double>(tier.max_pixels) / area);
    else if (area < static_cast<double>(tier.min_pixels))
        scale = std::sqrt(static_cast<double>(tier.min_pixels) / area);
    const double iw = scale * static_cast<double>(src_w);
    const double ih = scale * static_cast<double>(src_h);
    const double ia = iw / kPatchSide;
    const double ib = ih / kPatchSide;

    const int64_t fa = clamp_patch(static_cast<int64_t>(std::floor(ia)), maxp);
    const int64_t ca = clamp_patch(static_cast<int64_t>(std::ceil(ia)), maxp);
    const int64_t fb = clamp_patch(static_cast<int64_t>(std::floor(ib)), maxp);
    const int64_t cb = clamp_patch(static_cast<int64_t>(std::ceil(ib)), maxp);

    std::set<std::pair<int64_t, int64_t>> cands;
    for (int64_t a : {fa, ca})
        for (int64_t b : {fb, cb}) cands.insert({a, b});
    // Budget-pinned pairs for aspect ratios the floor/ceil grid cannot fit.
    for (int64_t a : {fa, ca, int64_t{1}}) {
        cands.insert({a, clamp_patch(maxp / a, maxp)});
        cands.insert({a, clamp_patch((minp + a - 1) / a, maxp)});
    }
    for (int64_t b : {fb, cb, int64_t{1}}) {
        cands.insert({clamp_patch(maxp / b, maxp), b});
        cands.insert({clamp_patch((minp + b - 1) / b, maxp), b});
    }
    // Tiny grids where the min bound can block the descent toward the ideal.
    for (int64_t a = 1; a * 1 <= 2 * minp; ++a)
        for (int64_t b = 1; a * b <= 2 * minp; ++b) cands.insert({a, b});

    bool found = false;
    Candidate best;
    for (const auto& [a, b] : cands) {
        if (a * b < minp || a * b > maxp) continue;
        Candidate c{a, b};
        if (!found || better(c, best, iw, ih)) {
            best = c;
            found = true;
        }
    }
    if (!found) throw ExtremeAspect("plan_resize: no valid patch grid for tier " + tier.name);

    ResizePlan plan;
    plan.src_w = src_w;
    plan.src_h = src_h;
    plan.patches_w = best.a;
    plan.patches_h = best.b;
    plan.dst_w = best.a * kPatchSide;
    plan.dst_h = best.b * kPatchSide;
    int64_t patches = best.a * best.b;
    plan.tokens = (patches + merge_factor - 1) / merge_factor;
    return plan;
}

int64_t token_count(const ResizePlan& plan) { return plan.tokens; }

int64_t page_token_budget(const std::vector<ResizePlan>& plans) {
    int64_t total = 0;
    for (const auto& p : plans) total += p.tokens;
    return total;
}

}  // namespace docparse
