#include "weilforge/ratlinalg.hpp"

#include <algorithm>

namespace weilforge {

int rat_rank_inplace(RatMat& m) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            if (m[r][col] == 0) continue;
            Rat factor = m[r][col] / m[rank][col];
            for (int c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Rat>> rat_kernel(RatMat m, int cols_hint) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : std::max(cols_hint, 0);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        Rat inv = m[rank][col];
        for (int c = 0; c < cols; ++c) m[rank][c] /= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rat factor = m[r][col];
            for (int c = 0; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free] = 1;
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace weilforge
