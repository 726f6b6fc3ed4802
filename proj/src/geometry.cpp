#include "ct2stl/geometry.hpp"

namespace ct2stl {

double signed_area(std::span<const Vec2> polygon) {
    const size_t n = polygon.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

double perimeter_closed(std::span<const Vec2> polygon) {
    const size_t n = polygon.size();
    if (n < 2) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += dist(polygon[i], polygon[(i + 1) % n]);
    return acc;
}

Vec2 centroid_of_points(std::span<const Vec2> points) {
    Vec2 c{};
    if (points.empty()) return c;
    for (const Vec2& p : points) c = c + p;
    return c * (1.0 / static_cast<double>(points.size()));
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
    const size_t n = polygon.size();
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = polygon[i];
        const Vec2 b = polygon[(i + 1) % n];
        // on-edge check first so boundary points are always "inside"
        if (orient2d_fast(a, b, p) == 0.0 &&
            p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
            p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y)) {
            return true;
        }
        if ((a.y > p.y) != (b.y > p.y)) {
            const double t = (p.y - a.y) / (b.y - a.y);
            if (p.x < a.x + t * (b.x - a.x)) inside = !inside;
        }
    }
    return inside;
}

}  // namespace ct2stl
