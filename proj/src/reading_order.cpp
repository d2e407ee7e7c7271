#include "docparse/reading_order.hpp"

#include <algorithm>
#include <numeric>

#include "docparse/errors.hpp"

namespace docparse {

ReadingOrder decode_order(const PairwiseOrderMatrix& m, const std::vector<BBox>& positions) {
    const size_t n = m.size();
    if (positions.size() != n)
        throw DimensionMismatch("decode_order: " + std::to_string(positions.size()) +
                                " positions for a " + std::to_string(n) + "x" +
                                std::to_string(n) + " matrix");
    for (const auto& row : m.scores)
        if (row.size() != n) throw DimensionMismatch("decode_order: ragged matrix");

    std::vector<int> copeland(n, 0);
    std::vector<double> borda(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (m.scores[i][j] > 0.5) copeland[i]++;
            borda[i] += m.scores[i][j];
        }
    }

    ReadingOrder order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (copeland[a] != copeland[b]) return copeland[a] > copeland[b];
        if (borda[a] != borda[b]) return borda[a] > borda[b];
        if (positions[a].y0 != positions[b].y0) return positions[a].y0 < positions[b].y0;
        if (positions[a].x0 != positions[b].x0) return positions[a].x0 < positions[b].x0;
        return a < b;
    });
    return order;
}

PairwiseOrderMatrix matrix_from_order(const ReadingOrder& order) {
    const size_t n = order.size();
    auto m = PairwiseOrderMatrix::zeros(n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b) m.scores[order[a]][order[b]] = 1.0;
    return m;
}

ReadingOrder geometric_order(const std::vector<BBox>& positions, double overlap_threshold) {
    const size_t n = positions.size();
    // Union-find column clustering by x-interval overlap.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double lo = std::max(positions[i].x0, positions[j].x0);
            double hi = std::min(positions[i].x1, positions[j].x1);
            double overlap = hi - lo;
            double min_w = std::min(positions[i].width(), positions[j].width());
            if (min_w > 0 && overlap >= overlap_threshold * min_w) {
                parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
            }
        }
    }
    // Leftmost x0 per cluster orders the columns.
    std::vector<double> col_x(n, 0.0);
    std::vector<bool> seen(n, false);
    for (size_t i = 0; i < n; ++i) {
        int root = find(static_cast<int>(i));
        if (!seen[root]) {
            seen[root] = true;
            col_x[root] = positions[i].x0;
        } else {
            col_x[root] = std::min(col_x[root], positions[i].x0);
        }
    }

    ReadingOrder order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra != rb) {
            if (col_x[ra] != col_x[rb]) return col_x[ra] < col_x[rb];
            return ra < rb;
        }
        if (positions[a].y0 != positions[b].y0) return positions[a].y0 < positions[b].y0;
        if (positions[a].x0 != positions[b].x0) return positions[a].x0 < positions[b].x0;
        return a < b;
    });
    return order;
}

}  // namespace docparse
