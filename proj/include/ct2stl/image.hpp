#pragma once

#include <cstdint>
#include <vector>

namespace ct2stl {

/// One CT slice, pixel values in Hounsfield Units, row-major.
struct SliceImage {
    int width = 0;
    int height = 0;
    int bits_stored = 16;  // in [8, 16]
    std::vector<std::int32_t> pixels;
    double slice_thickness_mm = 1.0;
    int slice_index = 0;

    std::int32_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    bool valid() const {
        return width > 0 && height > 0 && bits_stored >= 8 && bits_stored <= 16 &&
               slice_thickness_mm > 0.0 &&
               pixels.size() == static_cast<size_t>(width) * static_cast<size_t>(height);
    }
};

/// Grayscale working image, intensities kept real-valued in [0, 255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct EnhanceParams {
    double c = 1.0;
    double gamma = 0.3;
    int median_kernel = 9;
    int mean_kernel = 9;
};

/// Clamp HU into [window_min, window_max], then map linearly onto [0, 255]
/// rounding half up. Output has bits_stored = 8.
SliceImage hu_to_gray(const SliceImage& slice, double window_min, double window_max);

GrayImage gray_from_slice(const SliceImage& slice);
SliceImage slice_from_gray(const GrayImage& img, double thickness_mm, int slice_index);

/// s = 255 * c * (r/255)^gamma, clamped to [0, 255].
GrayImage power_law(const GrayImage& img, double c, double gamma);

/// k x k median with edge replication at the borders.
GrayImage median_filter(const GrayImage& img, int k);

/// k x k arithmetic mean with edge replication at the borders.
GrayImage mean_filter(const GrayImage& img, int k);

/// power_law, then median_filter, then mean_filter.
GrayImage enhance(const GrayImage& img, const EnhanceParams& p);

}  // namespace ct2stl
