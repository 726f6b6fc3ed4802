#include "ct2stl/contour.hpp"

#include <algorithm>

namespace ct2stl {

ContourPolyline normalize_contour(const ContourPolyline& c) {
    ContourPolyline out;
    out.points.reserve(c.points.size());
    for (const Vec2& p : c.points) {
        if (out.points.empty() || !(out.points.back() == p)) out.points.push_back(p);
    }
    while (out.points.size() > 1 && out.points.front() == out.points.back())
        out.points.pop_back();

    if (signed_area(out.points) < 0.0)
        std::reverse(out.points.begin(), out.points.end());
    out.orientation = signed_area(out.points) >= 0.0 ? Orientation::CCW : Orientation::CW;

    if (!out.points.empty()) {
        auto smallest = std::min_element(
            out.points.begin(), out.points.end(), [](const Vec2& a, const Vec2& b) {
                return a.y != b.y ? a.y < b.y : a.x < b.x;
            });
        std::rotate(out.points.begin(), smallest, out.points.end());
    }
    return out;
}

ContourPolyline rotate_contour(const ContourPolyline& c, int offset) {
    ContourPolyline out = c;
    const int n = static_cast<int>(c.points.size());
    if (n == 0) return out;
    const int k = ((offset % n) + n) % n;
    std::rotate(out.points.begin(), out.points.begin() + k, out.points.end());
    return out;
}

}  // namespace ct2stl
