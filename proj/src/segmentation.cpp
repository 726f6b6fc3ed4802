#include "ct2stl/segmentation.hpp"

#include <algorithm>

#include "ct2stl/errors.hpp"

namespace ct2stl {

BinaryMask threshold(const SliceImage& slice, double t_hu) {
    BinaryMask mask;
    mask.width = slice.width;
    mask.height = slice.height;
    mask.bits.resize(slice.pixels.size());
    for (size_t i = 0; i < slice.pixels.size(); ++i)
        mask.bits[i] = static_cast<double>(slice.pixels[i]) > t_hu ? 1 : 0;
    return mask;
}

namespace {

// Separable min/max over a k x k square window; out-of-bounds is background.
BinaryMask erode_or_dilate(const BinaryMask& mask, int k, bool erode) {
    const int h = k / 2;
    BinaryMask tmp;
    tmp.width = mask.width;
    tmp.height = mask.height;
    tmp.bits.assign(mask.bits.size(), 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool acc = erode;
            for (int dx = -h; dx <= h; ++dx) {
                const int xx = x + dx;
                const bool v = xx >= 0 && xx < mask.width ? mask.at(xx, y) : false;
                acc = erode ? (acc && v) : (acc || v);
            }
            tmp.set(x, y, acc);
        }
    }
    BinaryMask out;
    out.width = mask.width;
    out.height = mask.height;
    out.bits.assign(mask.bits.size(), 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool acc = erode;
            for (int dy = -h; dy <= h; ++dy) {
                const int yy = y + dy;
                const bool v = yy >= 0 && yy < mask.height ? tmp.at(x, yy) : false;
                acc = erode ? (acc && v) : (acc || v);
            }
            out.set(x, y, acc);
        }
    }
    return out;
}

}  // namespace

BinaryMask morph(const BinaryMask& mask, MorphOp op, int k) {
    if (k < 1 || k % 2 == 0) throw InvalidKernel("structuring element size must be odd and >= 1");
    switch (op) {
        case MorphOp::Erode: return erode_or_dilate(mask, k, true);
        case MorphOp::Dilate: return erode_or_dilate(mask, k, false);
        case MorphOp::Open: return erode_or_dilate(erode_or_dilate(mask, k, true), k, false);
        case MorphOp::Close: return erode_or_dilate(erode_or_dilate(mask, k, false), k, true);
    }
    throw InvalidKernel("unknown morphological operation");
}

namespace {

// Moore neighborhood in clockwise order for y-down image coordinates,
// starting east: E SE S SW W NW N NE.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

struct Pixel {
    int x, y;
    bool operator==(const Pixel&) const = default;
};

int direction_of(Pixel from, Pixel to) {
    for (int d = 0; d < 8; ++d) {
        if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
    }
    return -1;
}

// Moore-neighbor tracing from the component's raster-first pixel. The initial
// backtrack is the west neighbor, which the raster scan guarantees to be
// background. Terminates on re-entering the start pixel from the same
// backtrack (Jacob's criterion).
std::vector<Pixel> moore_trace(const BinaryMask& mask, Pixel start) {
    auto fg = [&](int x, int y) { return mask.in_bounds(x, y) && mask.at(x, y); };

    std::vector<Pixel> boundary{start};
    Pixel backtrack{start.x - 1, start.y};
    bool any_neighbor = false;
    for (int d = 0; d < 8 && !any_neighbor; ++d)
        any_neighbor = fg(start.x + kDx[d], start.y + kDy[d]);
    if (!any_neighbor) return boundary;  // isolated pixel

    const Pixel first_backtrack = backtrack;
    Pixel cur = start;
    const size_t limit = 4 * mask.bits.size() + 16;
    for (size_t step = 0; step < limit; ++step) {
        const int back_dir = direction_of(cur, backtrack);
        Pixel next{};
        Pixel next_backtrack{};
        bool found = false;
        for (int i = 1; i <= 8; ++i) {
            const int d = (back_dir + i) % 8;
            const Pixel cand{cur.x + kDx[d], cur.y + kDy[d]};
            if (fg(cand.x, cand.y)) {
                next = cand;
                const int prev = (back_dir + i - 1) % 8;
                next_backtrack = {cur.x + kDx[prev], cur.y + kDy[prev]};
                found = true;
                break;
            }
        }
        if (!found) break;  // unreachable once any_neighbor holds
        if (next == start && next_backtrack == first_backtrack) break;
        boundary.push_back(next);
        cur = next;
        backtrack = next_backtrack;
    }
    return boundary;
}

void flood_fill_component(const BinaryMask& mask, Pixel seed, std::vector<std::uint8_t>& visited) {
    std::vector<Pixel> stack{seed};
    visited[static_cast<size_t>(seed.y) * mask.width + seed.x] = 1;
    while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int d = 0; d < 8; ++d) {
            const int x = p.x + kDx[d];
            const int y = p.y + kDy[d];
            if (!mask.in_bounds(x, y) || !mask.at(x, y)) continue;
            const size_t idx = static_cast<size_t>(y) * mask.width + x;
            if (visited[idx]) continue;
            visited[idx] = 1;
            stack.push_back({x, y});
        }
    }
}

}  // namespace

std::vector<ContourPolyline> trace_contours(const BinaryMask& mask, int min_points) {
    if (min_points < 3) throw InvalidParam("min_points must be >= 3");
    std::vector<ContourPolyline> out;
    std::vector<std::uint8_t> visited(mask.bits.size(), 0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const size_t idx = static_cast<size_t>(y) * mask.width + x;
            if (!mask.bits[idx] || visited[idx]) continue;
            const auto boundary = moore_trace(mask, {x, y});
            flood_fill_component(mask, {x, y}, visited);
            if (boundary.size() < static_cast<size_t>(min_points)) continue;
            ContourPolyline c;
            c.points.reserve(boundary.size());
            for (const Pixel& p : boundary)
                c.points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
            c = normalize_contour(c);
            if (c.points.size() >= static_cast<size_t>(min_points)) out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<ContourPolyline> select_roi(std::vector<ContourPolyline> contours, RoiPolicy policy) {
    if (policy == RoiPolicy::All) return contours;
    if (contours.empty()) throw EmptyInput("no contours to select from");
    auto largest = std::max_element(
        contours.begin(), contours.end(), [](const ContourPolyline& a, const ContourPolyline& b) {
            return std::abs(a.area()) < std::abs(b.area());
        });
    return {std::move(*largest)};
}

}  // namespace ct2stl
