#pragma once

#include <vector>

#include "ct2stl/geometry.hpp"

namespace ct2stl {

enum class Orientation { CCW, CW };

/// Closed polyline; the last point connects back to the first implicitly.
struct ContourPolyline {
    std::vector<Vec2> points;
    Orientation orientation = Orientation::CCW;

    size_t size() const { return points.size(); }
    double area() const { return signed_area(points); }
    double perimeter() const { return perimeter_closed(points); }
};

/// Canonical form: consecutive duplicates removed, CCW winding, start point
/// rotated to the lexicographically smallest (y, then x) vertex.
ContourPolyline normalize_contour(const ContourPolyline& c);

/// Rotate the point sequence left by `offset` (point[offset] becomes point[0]).
ContourPolyline rotate_contour(const ContourPolyline& c, int offset);

}  // namespace ct2stl
