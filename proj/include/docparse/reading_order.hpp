#pragma once

#include <vector>

#include "docparse/doc_model.hpp"

namespace docparse {

/// Pairwise precedence scores: scores[i][j] is the estimated probability
/// that region i precedes region j. Diagonal entries are ignored.
struct PairwiseOrderMatrix {
    std::vector<std::vector<double>> scores;

    size_t size() const { return scores.size(); }
    static PairwiseOrderMatrix zeros(size_t n) {
        return {std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
    }
};

using ReadingOrder = std::vector<int>;  // permutation of 0..n-1

/// Linearize a precedence matrix: Copeland score (pairwise wins at the 0.5
/// threshold) descending, ties by Borda score (row sums) descending, then
/// geometrically by (y0, x0) of positions, then index.
ReadingOrder decode_order(const PairwiseOrderMatrix& m, const std::vector<BBox>& positions);

/// Consistent 0/1 matrix for a known order; test-fixture inverse of decode.
PairwiseOrderMatrix matrix_from_order(const ReadingOrder& order);

/// Column-aware top-to-bottom, left-to-right fallback when no matrix is
/// available. Boxes are clustered into columns by x-interval overlap.
ReadingOrder geometric_order(const std::vector<BBox>& positions, double overlap_threshold = 0.5);

}  // namespace docparse
