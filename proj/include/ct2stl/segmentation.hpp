#pragma once

#include <cstdint>
#include <vector>

#include "ct2stl/contour.hpp"
#include "ct2stl/image.hpp"

namespace ct2stl {

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// Foreground where HU is strictly above t.
BinaryMask threshold(const SliceImage& slice, double t_hu);

enum class MorphOp { Erode, Dilate, Open, Close };

/// Binary morphology with a k x k square structuring element. Out-of-bounds
/// pixels count as background, so erosion shrinks foreground at the borders.
BinaryMask morph(const BinaryMask& mask, MorphOp op, int k);

/// Outer boundary of each 8-connected foreground component, Moore-neighbor
/// traced with Jacob's stopping criterion. Contours shorter than min_points
/// are dropped. Output contours are CCW and start at their lexicographically
/// smallest (y, then x) point; components are ordered by raster scan.
std::vector<ContourPolyline> trace_contours(const BinaryMask& mask, int min_points);

enum class RoiPolicy { LargestArea, All };

std::vector<ContourPolyline> select_roi(std::vector<ContourPolyline> contours, RoiPolicy policy);

}  // namespace ct2stl
