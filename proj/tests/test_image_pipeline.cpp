#include <doctest.h>

#include <random>

#include "ct2stl/errors.hpp"
#include "ct2stl/image.hpp"

using namespace ct2stl;

namespace {

GrayImage make_gray(int w, int h, double fill = 0.0) {
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(static_cast<size_t>(w) * h, fill);
    return img;
}

GrayImage random_gray(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    GrayImage img = make_gray(w, h);
    for (double& p : img.pixels) p = dist(rng);
    return img;
}

// brute-force oracles: materialize every replicated neighborhood
double oracle_median(const GrayImage& img, int x, int y, int k) {
    std::vector<double> values;
    const int h = k / 2;
    for (int dy = -h; dy <= h; ++dy) {
        for (int dx = -h; dx <= h; ++dx) {
            const int xx = std::clamp(x + dx, 0, img.width - 1);
            const int yy = std::clamp(y + dy, 0, img.height - 1);
            values.push_back(img.at(xx, yy));
        }
    }
    std::sort(values.begin(), values.end());
    return values[values.size() / 2];
}

double oracle_mean(const GrayImage& img, int x, int y, int k) {
    double acc = 0.0;
    const int h = k / 2;
    for (int dy = -h; dy <= h; ++dy) {
        for (int dx = -h; dx <= h; ++dx) {
            const int xx = std::clamp(x + dx, 0, img.width - 1);
            const int yy = std::clamp(y + dy, 0, img.height - 1);
            acc += img.at(xx, yy);
        }
    }
    return acc / (k * k);
}

}  // namespace

TEST_CASE("power_law endpoints") {
    GrayImage img = make_gray(2, 2);
    img.pixels = {0.0, 255.0, 128.0, 64.0};
    const GrayImage out = power_law(img, 1.0, 0.3);
    CHECK(out.pixels[0] == doctest::Approx(0.0));
    CHECK(out.pixels[1] == doctest::Approx(255.0));
    // 255 * (128/255)^0.3 and 255 * (64/255)^0.3, high-precision references
    CHECK(out.pixels[2] == doctest::Approx(207.36770307415363).epsilon(1e-12));
    CHECK(out.pixels[3] == doctest::Approx(168.43491374886959).epsilon(1e-12));
}

TEST_CASE("power_law rejects bad parameters") {
    const GrayImage img = make_gray(2, 2);
    CHECK_THROWS_AS(power_law(img, 0.0, 0.3), InvalidParam);
    CHECK_THROWS_AS(power_law(img, 1.0, -1.0), InvalidParam);
}

TEST_CASE("power_law is monotone for gamma 0.3") {
    GrayImage img = make_gray(256, 1);
    for (int i = 0; i < 256; ++i) img.pixels[i] = i;
    const GrayImage out = power_law(img, 1.0, 0.3);
    for (int i = 1; i < 256; ++i) CHECK(out.pixels[i] > out.pixels[i - 1]);
}

TEST_CASE("median filter handles constants and salt noise") {
    GrayImage img = make_gray(8, 8, 42.0);
    GrayImage out = median_filter(img, 3);
    for (double p : out.pixels) CHECK(p == 42.0);

    GrayImage salt = make_gray(8, 8, 0.0);
    salt.at(4, 4) = 255.0;
    out = median_filter(salt, 3);
    for (double p : out.pixels) CHECK(p == 0.0);
}

TEST_CASE("median filter matches brute-force oracle") {
    const GrayImage img = random_gray(16, 16, 1234);
    const GrayImage out = median_filter(img, 9);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) CHECK(out.at(x, y) == oracle_median(img, x, y, 9));
}

TEST_CASE("mean filter matches brute-force oracle") {
    const GrayImage img = random_gray(16, 16, 99);
    const GrayImage out = mean_filter(img, 9);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            CHECK(out.at(x, y) == doctest::Approx(oracle_mean(img, x, y, 9)).epsilon(1e-12));
}

TEST_CASE("mean filter of kernel 1 is identity; constants preserved") {
    const GrayImage img = random_gray(6, 5, 7);
    const GrayImage out = mean_filter(img, 1);
    for (size_t i = 0; i < img.pixels.size(); ++i) CHECK(out.pixels[i] == img.pixels[i]);

    const GrayImage constant = make_gray(7, 7, 13.5);
    const GrayImage mean_out = mean_filter(constant, 5);
    for (double p : mean_out.pixels) CHECK(p == doctest::Approx(13.5).epsilon(1e-12));
}

TEST_CASE("filters keep values inside the input range") {
    const GrayImage img = random_gray(12, 12, 5);
    const auto [lo_it, hi_it] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    for (int k : {3, 5}) {
        for (const GrayImage& out : {median_filter(img, k), mean_filter(img, k)}) {
            for (double p : out.pixels) {
                CHECK(p >= *lo_it);
                CHECK(p <= *hi_it);
            }
        }
    }
}

TEST_CASE("mean filter commutes with constant offset before clamping") {
    const GrayImage img = random_gray(10, 10, 77);
    GrayImage shifted = img;
    for (double& p : shifted.pixels) p += 11.25;
    const GrayImage a = mean_filter(shifted, 5);
    const GrayImage b = mean_filter(img, 5);
    for (size_t i = 0; i < a.pixels.size(); ++i)
        CHECK(a.pixels[i] == doctest::Approx(b.pixels[i] + 11.25).epsilon(1e-12));
}

TEST_CASE("filters reject invalid kernels") {
    const GrayImage img = make_gray(8, 8);
    CHECK_THROWS_AS(median_filter(img, 4), InvalidKernel);
    CHECK_THROWS_AS(mean_filter(img, 9), InvalidKernel);  // oversized for 8x8
    CHECK_THROWS_AS(median_filter(img, -3), InvalidKernel);
}

TEST_CASE("enhance with degenerate parameters is the identity") {
    const GrayImage img = random_gray(9, 9, 3);
    const GrayImage out = enhance(img, {1.0, 1.0, 1, 1});
    for (size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(out.pixels[i] == doctest::Approx(img.pixels[i]).epsilon(1e-12));
}

TEST_CASE("enhance of a constant image is the closed-form constant") {
    const GrayImage img = make_gray(32, 32, 100.0);
    const GrayImage out = enhance(img, {1.0, 0.3, 9, 9});
    // 255 * (100/255)^0.3, filters preserve constants
    for (double p : out.pixels) CHECK(p == doctest::Approx(192.56534244575386).epsilon(1e-12));
}

TEST_CASE("stage order is observable") {
    // The median commutes with any monotone pointwise map, so ordering shows
    // up against the mean stage: on a 3x3 with one outlier, averaging before
    // the power law differs from averaging afterwards.
    GrayImage img = make_gray(3, 3, 16.0);
    img.at(1, 1) = 255.0;
    const GrayImage mean_then_pow = power_law(mean_filter(img, 3), 1.0, 0.3);
    const GrayImage pow_then_mean = mean_filter(power_law(img, 1.0, 0.3), 3);
    // corner pixel, by hand: window holds the outlier once (weight 1 of 9)
    const double corner_mean = (16.0 * 8 + 255.0) / 9.0;
    CHECK(mean_then_pow.at(0, 0) ==
          doctest::Approx(255.0 * std::pow(corner_mean / 255.0, 0.3)).epsilon(1e-12));
    const double corner_pow =
        (255.0 * std::pow(16.0 / 255.0, 0.3) * 8 + 255.0) / 9.0;
    CHECK(pow_then_mean.at(0, 0) == doctest::Approx(corner_pow).epsilon(1e-12));
    CHECK(std::abs(mean_then_pow.at(0, 0) - pow_then_mean.at(0, 0)) > 1.0);

    // and the monotone-map commutation itself, as a property
    const GrayImage noisy = random_gray(8, 8, 21);
    const GrayImage a = power_law(median_filter(noisy, 3), 1.0, 0.3);
    const GrayImage b = median_filter(power_law(noisy, 1.0, 0.3), 3);
    for (size_t i = 0; i < a.pixels.size(); ++i)
        CHECK(a.pixels[i] == doctest::Approx(b.pixels[i]).epsilon(1e-12));
}

TEST_CASE("hu_to_gray endpoints, midpoint rounding and clamping") {
    SliceImage slice;
    slice.width = 5;
    slice.height = 1;
    slice.bits_stored = 16;
    slice.pixels = {0, 100, 50, -20, 150};  // min, max, midpoint, below, above
    slice.slice_thickness_mm = 1.5;
    const SliceImage out = hu_to_gray(slice, 0.0, 100.0);
    CHECK(out.bits_stored == 8);
    CHECK(out.pixels[0] == 0);
    CHECK(out.pixels[1] == 255);
    // 50 / 100 * 255 = 127.5 -> rounds half up
    CHECK(out.pixels[2] == 128);
    CHECK(out.pixels[3] == 0);
    CHECK(out.pixels[4] == 255);
}

TEST_CASE("hu_to_gray is monotone and validates the window") {
    SliceImage slice;
    slice.width = 200;
    slice.height = 1;
    slice.bits_stored = 16;
    slice.slice_thickness_mm = 1.0;
    for (int i = 0; i < 200; ++i) slice.pixels.push_back(-500 + 17 * i);
    const SliceImage out = hu_to_gray(slice, -400.0, 2500.0);
    for (int i = 1; i < 200; ++i) CHECK(out.pixels[i] >= out.pixels[i - 1]);
    CHECK_THROWS_AS(hu_to_gray(slice, 100.0, 100.0), InvalidWindow);
}
