#include <doctest.h>

#include <algorithm>
#include <random>

#include "ct2stl/errors.hpp"
#include "ct2stl/segmentation.hpp"

using namespace ct2stl;

namespace {

BinaryMask make_mask(int w, int h) {
    BinaryMask m;
    m.width = w;
    m.height = h;
    m.bits.assign(static_cast<size_t>(w) * h, 0);
    return m;
}

SliceImage slice_of(int w, int h, std::vector<std::int32_t> pixels) {
    SliceImage s;
    s.width = w;
    s.height = h;
    s.bits_stored = 16;
    s.slice_thickness_mm = 1.0;
    s.pixels = std::move(pixels);
    return s;
}

BinaryMask random_blobs(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    BinaryMask m = make_mask(w, h);
    std::uniform_int_distribution<int> cx(2, w - 3), cy(2, h - 3), r(1, 4);
    const int blobs = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int b = 0; b < blobs; ++b) {
        const int x0 = cx(rng), y0 = cy(rng), rad = r(rng);
        for (int y = std::max(0, y0 - rad); y <= std::min(h - 1, y0 + rad); ++y)
            for (int x = std::max(0, x0 - rad); x <= std::min(w - 1, x0 + rad); ++x)
                if ((x - x0) * (x - x0) + (y - y0) * (y - y0) <= rad * rad) m.set(x, y, true);
    }
    return m;
}

// 8-connected component labels in raster-scan discovery order
std::vector<int> label_components(const BinaryMask& m) {
    std::vector<int> labels(m.bits.size(), -1);
    int next_label = 0;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            const size_t idx = static_cast<size_t>(y) * m.width + x;
            if (!m.bits[idx] || labels[idx] != -1) continue;
            std::vector<std::pair<int, int>> stack{{x, y}};
            labels[idx] = next_label;
            while (!stack.empty()) {
                auto [px, py] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = px + dx, ny = py + dy;
                        if (!m.in_bounds(nx, ny) || !m.at(nx, ny)) continue;
                        const size_t nidx = static_cast<size_t>(ny) * m.width + nx;
                        if (labels[nidx] == -1) {
                            labels[nidx] = next_label;
                            stack.push_back({nx, ny});
                        }
                    }
            }
            ++next_label;
        }
    }
    return labels;
}

// background pixels unreachable from the border (4-connected): enclosed holes
std::vector<std::uint8_t> enclosed_background(const BinaryMask& m) {
    std::vector<std::uint8_t> reached(m.bits.size(), 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int x, int y) {
        const size_t idx = static_cast<size_t>(y) * m.width + x;
        if (!m.bits[idx] && !reached[idx]) {
            reached[idx] = 1;
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < m.width; ++x) {
        push(x, 0);
        push(x, m.height - 1);
    }
    for (int y = 0; y < m.height; ++y) {
        push(0, y);
        push(m.width - 1, y);
    }
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const int dx4[] = {1, -1, 0, 0}, dy4[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int nx = x + dx4[d], ny = y + dy4[d];
            if (m.in_bounds(nx, ny)) push(nx, ny);
        }
    }
    std::vector<std::uint8_t> enclosed(m.bits.size(), 0);
    for (size_t i = 0; i < m.bits.size(); ++i)
        if (!m.bits[i] && !reached[i]) enclosed[i] = 1;
    return enclosed;
}

}  // namespace

TEST_CASE("threshold is strict") {
    const SliceImage all_400 = slice_of(2, 2, {400, 400, 400, 400});
    BinaryMask m = threshold(all_400, 400.0);
    CHECK(std::count(m.bits.begin(), m.bits.end(), 1) == 0);

    const SliceImage all_1000 = slice_of(2, 2, {1000, 1000, 1000, 1000});
    m = threshold(all_1000, 400.0);
    CHECK(std::count(m.bits.begin(), m.bits.end(), 1) == 4);

    const SliceImage checker = slice_of(2, 2, {300, 500, 500, 300});
    m = threshold(checker, 400.0);
    CHECK(m.bits == std::vector<std::uint8_t>{0, 1, 1, 0});
}

TEST_CASE("threshold is pointwise: permuting rows permutes the mask") {
    std::mt19937 rng(5);
    SliceImage s = slice_of(6, 6, std::vector<std::int32_t>(36));
    for (auto& p : s.pixels) p = std::uniform_int_distribution<int>(0, 800)(rng);
    SliceImage permuted = s;
    const std::vector<int> perm{3, 0, 5, 1, 4, 2};
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x)
            permuted.pixels[static_cast<size_t>(y) * 6 + x] = s.at(x, perm[y]);
    const BinaryMask a = threshold(s, 400.0);
    const BinaryMask b = threshold(permuted, 400.0);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) CHECK(b.at(x, y) == a.at(x, perm[y]));
}

TEST_CASE("opening removes an isolated pixel") {
    BinaryMask m = make_mask(7, 7);
    m.set(3, 3, true);
    const BinaryMask opened = morph(m, MorphOp::Open, 3);
    CHECK(std::count(opened.bits.begin(), opened.bits.end(), 1) == 0);
}

TEST_CASE("closing fills an interior pinhole") {
    BinaryMask m = make_mask(9, 9);
    for (int y = 2; y <= 6; ++y)
        for (int x = 2; x <= 6; ++x) m.set(x, y, true);
    m.set(4, 4, false);
    const BinaryMask closed = morph(m, MorphOp::Close, 3);
    for (int y = 2; y <= 6; ++y)
        for (int x = 2; x <= 6; ++x) CHECK(closed.at(x, y));
}

TEST_CASE("morph extensivity properties on random masks") {
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        const BinaryMask m = random_blobs(16, 16, seed);
        const BinaryMask opened = morph(m, MorphOp::Open, 3);
        const BinaryMask closed = morph(m, MorphOp::Close, 3);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                // opening never adds foreground
                if (opened.at(x, y)) CHECK(m.at(x, y));
                // closing never removes it, away from the border where the
                // background padding of erosion bites
                if (x >= 1 && x < 15 && y >= 1 && y < 15 && m.at(x, y)) CHECK(closed.at(x, y));
            }
        }
    }
}

TEST_CASE("morph rejects even kernels") {
    const BinaryMask m = make_mask(4, 4);
    CHECK_THROWS_AS(morph(m, MorphOp::Erode, 2), InvalidKernel);
}

TEST_CASE("trace of a centered 3x3 block yields its 8 boundary pixels, CCW") {
    BinaryMask m = make_mask(5, 5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) m.set(x, y, true);
    const auto contours = trace_contours(m, 3);
    REQUIRE(contours.size() == 1);
    const auto& pts = contours[0].points;
    REQUIRE(pts.size() == 8);
    const std::vector<Vec2> expected{{1, 1}, {2, 1}, {3, 1}, {3, 2},
                                     {3, 3}, {2, 3}, {1, 3}, {1, 2}};
    for (size_t i = 0; i < 8; ++i) {
        CHECK(pts[i].x == expected[i].x);
        CHECK(pts[i].y == expected[i].y);
    }
    CHECK(contours[0].area() > 0.0);
    CHECK(contours[0].orientation == Orientation::CCW);
}

TEST_CASE("empty mask gives an empty list") {
    CHECK(trace_contours(make_mask(4, 4), 3).empty());
}

TEST_CASE("two disjoint blocks give two contours in scan order") {
    BinaryMask m = make_mask(12, 6);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) m.set(x, y, true);
    for (int y = 2; y <= 4; ++y)
        for (int x = 7; x <= 9; ++x) m.set(x, y, true);
    const auto contours = trace_contours(m, 3);
    REQUIRE(contours.size() == 2);
    CHECK(contours[0].points.front().y < contours[1].points.front().y);
}

TEST_CASE("tracing is deterministic") {
    const BinaryMask m = random_blobs(24, 24, 7);
    const auto a = trace_contours(m, 3);
    const auto b = trace_contours(m, 3);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].points.size() == b[i].points.size());
        for (size_t k = 0; k < a[i].points.size(); ++k) CHECK(a[i].points[k] == b[i].points[k]);
    }
}

TEST_CASE("traced contours cover exactly their component's outer region") {
    for (std::uint32_t seed = 100; seed < 140; ++seed) {
        const BinaryMask m = random_blobs(32, 32, seed);
        const auto labels = label_components(m);
        const int n_components =
            labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        for (int comp = 0; comp < n_components; ++comp) {
            BinaryMask isolated = make_mask(m.width, m.height);
            size_t size = 0;
            for (size_t i = 0; i < m.bits.size(); ++i)
                if (labels[i] == comp) {
                    isolated.bits[i] = 1;
                    ++size;
                }
            const auto contours = trace_contours(isolated, 3);
            if (contours.empty()) {
                CHECK(size <= 2);  // too small to form a polyline
                continue;
            }
            REQUIRE(contours.size() == 1);
            const auto& poly = contours[0].points;
            const auto holes = enclosed_background(isolated);
            for (int y = 0; y < m.height; ++y) {
                for (int x = 0; x < m.width; ++x) {
                    const size_t idx = static_cast<size_t>(y) * m.width + x;
                    const bool expected = isolated.bits[idx] != 0 || holes[idx] != 0;
                    const bool covered = point_in_polygon(
                        {static_cast<double>(x), static_cast<double>(y)}, poly);
                    CHECK(covered == expected);
                }
            }
        }
    }
}

TEST_CASE("select_roi keeps the largest contour") {
    ContourPolyline small;
    small.points = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    ContourPolyline big;
    big.points = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    auto picked = select_roi({small, big}, RoiPolicy::LargestArea);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0].area() == doctest::Approx(100.0));

    auto all = select_roi({small, big}, RoiPolicy::All);
    CHECK(all.size() == 2);

    CHECK_THROWS_AS(select_roi({}, RoiPolicy::LargestArea), EmptyInput);
}
