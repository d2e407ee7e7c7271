#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace docparse {

inline constexpr int kPatchSide = 28;
inline constexpr int64_t kPatchArea = kPatchSide * kPatchSide;  // 784

/// Pixel-budget interval for region resizing. All builtin tiers share the
/// 3136-pixel floor; budgets must be multiples of 784.
struct Tier {
    std::string name;
    int64_t min_pixels = 3136;
    int64_t max_pixels = 0;

    int64_t min_patches() const { return min_pixels / kPatchArea; }
    int64_t max_patches() const { return max_pixels / kPatchArea; }

    static Tier S() { return {"S", 3136, 235200}; }
    static Tier M() { return {"M", 3136, 392000}; }
    static Tier L() { return {"L", 3136, 627200}; }
    static Tier from_name(const std::string& name);  // "s"/"m"/"l"
};

struct ResizePlan {
    int64_t src_w = 0, src_h = 0;
    int64_t dst_w = 0, dst_h = 0;
    int64_t patches_w = 0, patches_h = 0;
    int64_t tokens = 0;

    bool operator==(const ResizePlan&) const = default;
};

/// Plan the resize of a src_w x src_h region image under a tier budget.
///
/// Scale is chosen so the ideal area lands inside [min_pixels, max_pixels]
/// (identity when already inside); the output is the valid multiple-of-28
/// pair nearest the ideally scaled size (L1 distance, ties to the larger
/// area then the smaller width). Deterministic; throws ExtremeAspect only
/// if no valid pair exists, which cannot happen for the builtin tiers.
ResizePlan plan_resize(int64_t src_w, int64_t src_h, const Tier& tier,
                       int merge_factor = 1);

int64_t token_count(const ResizePlan& plan);

/// Per-page vision-token total across region plans.
int64_t page_token_budget(const std::vector<ResizePlan>& plans);

}  // namespace docparse
