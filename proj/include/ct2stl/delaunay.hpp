#pragma once

#include <array>
#include <span>
#include <vector>

#include "ct2stl/geometry.hpp"

namespace ct2stl {

/// Delaunay triangulation of the convex hull of `points`.
///
/// Triangles are returned as CCW index triples, canonically ordered
/// (smallest index first in each triple, triples sorted). Cocircular ties
/// resolve toward diagonals incident to the lowest point index. Exact
/// duplicates are rejected.
std::vector<std::array<int, 3>> delaunay_2d(std::span<const Vec2> points);

}  // namespace ct2stl
