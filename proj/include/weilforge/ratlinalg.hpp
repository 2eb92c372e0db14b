#ifndef WEILFORGE_RATLINALG_HPP
#define WEILFORGE_RATLINALG_HPP

#include <vector>

#include "weilforge/rational.hpp"

namespace weilforge {

using RatMat = std::vector<std::vector<Rat>>;

// exact row reduction; returns rank, m is destroyed
int rat_rank_inplace(RatMat& m);

inline int rat_rank(RatMat m) { return rat_rank_inplace(m); }

// basis of the right kernel {x : M x = 0}; cols must be supplied when m has no rows
std::vector<std::vector<Rat>> rat_kernel(RatMat m, int cols_hint = -1);

} // namespace weilforge

#endif
