#include "ct2stl/image.hpp"

#include <algorithm>
#include <cmath>

#include "ct2stl/errors.hpp"

namespace ct2stl {

namespace {

int clamp_index(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

void check_kernel(const GrayImage& img, int k) {
    if (k < 1 || k % 2 == 0) throw InvalidKernel("kernel size must be odd and >= 1");
    if (k > img.width || k > img.height)
        throw InvalidKernel("kernel size exceeds image dimensions");
}

}  // namespace

SliceImage hu_to_gray(const SliceImage& slice, double window_min, double window_max) {
    if (!(window_min < window_max)) throw InvalidWindow("window_min must be < window_max");
    SliceImage out;
    out.width = slice.width;
    out.height = slice.height;
    out.bits_stored = 8;
    out.slice_thickness_mm = slice.slice_thickness_mm;
    out.slice_index = slice.slice_index;
    out.pixels.resize(slice.pixels.size());
    const double range = window_max - window_min;
    for (size_t i = 0; i < slice.pixels.size(); ++i) {
        double hu = static_cast<double>(slice.pixels[i]);
        hu = std::clamp(hu, window_min, window_max);
        const double g = (hu - window_min) * 255.0 / range;
        out.pixels[i] = static_cast<std::int32_t>(std::floor(g + 0.5));
    }
    return out;
}

GrayImage gray_from_slice(const SliceImage& slice) {
    GrayImage out;
    out.width = slice.width;
    out.height = slice.height;
    out.pixels.resize(slice.pixels.size());
    for (size_t i = 0; i < slice.pixels.size(); ++i)
        out.pixels[i] = std::clamp(static_cast<double>(slice.pixels[i]), 0.0, 255.0);
    return out;
}

SliceImage slice_from_gray(const GrayImage& img, double thickness_mm, int slice_index) {
    SliceImage out;
    out.width = img.width;
    out.height = img.height;
    out.bits_stored = 8;
    out.slice_thickness_mm = thickness_mm;
    out.slice_index = slice_index;
    out.pixels.resize(img.pixels.size());
    for (size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = static_cast<std::int32_t>(
            std::floor(std::clamp(img.pixels[i], 0.0, 255.0) + 0.5));
    return out;
}

GrayImage power_law(const GrayImage& img, double c, double gamma) {
    if (c <= 0.0 || gamma <= 0.0) throw InvalidParam("power-law needs c > 0 and gamma > 0");
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        const double r = std::clamp(img.pixels[i], 0.0, 255.0) / 255.0;
        const double s = 255.0 * c * std::pow(r, gamma);
        out.pixels[i] = std::clamp(s, 0.0, 255.0);
    }
    return out;
}

GrayImage median_filter(const GrayImage& img, int k) {
    check_kernel(img, k);
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    const int h = k / 2;
    std::vector<double> window(static_cast<size_t>(k) * k);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            size_t m = 0;
            for (int dy = -h; dy <= h; ++dy) {
                const int yy = clamp_index(y + dy, 0, img.height - 1);
                for (int dx = -h; dx <= h; ++dx) {
                    const int xx = clamp_index(x + dx, 0, img.width - 1);
                    window[m++] = img.at(xx, yy);
                }
            }
            auto mid = window.begin() + static_cast<long>(m / 2);
            std::nth_element(window.begin(), mid, window.begin() + static_cast<long>(m));
            out.at(x, y) = *mid;
        }
    }
    return out;
}

GrayImage mean_filter(const GrayImage& img, int k) {
    check_kernel(img, k);
    const int h = k / 2;
    // separable: horizontal pass then vertical pass, replication per axis
    GrayImage tmp;
    tmp.width = img.width;
    tmp.height = img.height;
    tmp.pixels.resize(img.pixels.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dx = -h; dx <= h; ++dx)
                acc += img.at(clamp_index(x + dx, 0, img.width - 1), y);
            tmp.at(x, y) = acc / k;
        }
    }
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(img.pixels.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -h; dy <= h; ++dy)
                acc += tmp.at(x, clamp_index(y + dy, 0, img.height - 1));
            out.at(x, y) = acc / k;
        }
    }
    return out;
}

GrayImage enhance(const GrayImage& img, const EnhanceParams& p) {
    GrayImage s = power_law(img, p.c, p.gamma);
    s = median_filter(s, p.median_kernel);
    return mean_filter(s, p.mean_kernel);
}

}  // namespace ct2stl
