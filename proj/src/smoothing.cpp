#include "ct2stl/smoothing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ct2stl/errors.hpp"

namespace ct2stl {

int smoothing_window(double span, int n) {
    if (!(span > 0.0 && span < 1.0)) throw InvalidSpan("span must lie in the open interval (0, 1)");
    int w = static_cast<int>(std::lround(span * n));
    if (w % 2 == 0) ++w;
    if (w < 3) w = 3;
    while (w > n) w -= 2;
    return w;
}

namespace {

double tricube(double d, double d_max) {
    const double t = d / d_max;
    const double u = 1.0 - t * t * t;
    return u * u * u;
}

// Solve the 3x3 (or leading 2x2 / 1x1) weighted normal equations by Gaussian
// elimination with partial pivoting. Returns false when rank-deficient.
bool solve_normal(std::array<std::array<double, 3>, 3> m, std::array<double, 3>& rhs, int dim) {
    double scale = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) scale = std::max(scale, std::abs(m[i][j]));
    if (scale == 0.0) return false;
    const double tiny = 1e-12 * scale;
    std::array<int, 3> perm{0, 1, 2};
    for (int col = 0; col < dim; ++col) {
        int pivot = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[pivot]][col])) pivot = r;
        std::swap(perm[col], perm[pivot]);
        const double p = m[perm[col]][col];
        if (std::abs(p) < tiny) return false;
        for (int r = col + 1; r < dim; ++r) {
            const double f = m[perm[r]][col] / p;
            for (int c = col; c < dim; ++c) m[perm[r]][c] -= f * m[perm[col]][c];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    std::array<double, 3> sol{};
    for (int i = dim - 1; i >= 0; --i) {
        double acc = rhs[perm[i]];
        for (int c = i + 1; c < dim; ++c) acc -= m[perm[i]][c] * sol[c];
        sol[i] = acc / m[perm[i]][i];
    }
    rhs = sol;
    return true;
}

// Weighted polynomial fit evaluated at u = 0; tries degree 2, then 1, then
// the weighted mean. Returns the degree used (-1 means weighted mean).
int fit_at_center(const std::vector<double>& u, const std::vector<double>& w,
                  const std::vector<double>& v, double& result) {
    for (int degree = 2; degree >= 1; --degree) {
        const int dim = degree + 1;
        std::array<std::array<double, 3>, 3> m{};
        std::array<double, 3> rhs{};
        for (size_t k = 0; k < u.size(); ++k) {
            if (w[k] == 0.0) continue;
            std::array<double, 3> phi{1.0, u[k], u[k] * u[k]};
            for (int i = 0; i < dim; ++i) {
                rhs[i] += w[k] * phi[i] * v[k];
                for (int j = 0; j < dim; ++j) m[i][j] += w[k] * phi[i] * phi[j];
            }
        }
        if (solve_normal(m, rhs, dim)) {
            result = rhs[0];
            return degree;
        }
    }
    double sw = 0.0, sv = 0.0;
    for (size_t k = 0; k < u.size(); ++k) {
        sw += w[k];
        sv += w[k] * v[k];
    }
    result = sw > 0.0 ? sv / sw : v[u.size() / 2];
    return -1;
}

}  // namespace

std::vector<double> smooth_cyclic(const std::vector<double>& values, int window,
                                  SmoothMethod method, SmoothStats* stats) {
    const int n = static_cast<int>(values.size());
    if (n < 3) throw TooFewPoints("need at least 3 samples to smooth");
    if (window < 3 || window % 2 == 0 || window > n)
        throw InvalidParam("smoothing window must be odd, >= 3 and <= n");
    const int h = window / 2;
    std::vector<double> out(values.size());

    if (method == SmoothMethod::MovingAverage) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int t = -h; t <= h; ++t) acc += values[((i + t) % n + n) % n];
            out[i] = acc / window;
        }
        return out;
    }

    std::vector<double> u(window), w(window), v(window);
    for (int i = 0; i < n; ++i) {
        double u_max = 0.0;
        for (int t = -h; t <= h; ++t) {
            const int j = ((i + t) % n + n) % n;
            const int k = t + h;
            v[k] = values[j];
            // abscissa is the sample's own index, centered on i
            u[k] = static_cast<double>(j - i);
            w[k] = tricube(std::abs(static_cast<double>(t)), static_cast<double>(h));
            u_max = std::max(u_max, std::abs(u[k]));
        }
        if (u_max > 0.0)
            for (double& uk : u) uk /= u_max;
        double fitted = 0.0;
        const int degree = fit_at_center(u, w, v, fitted);
        if (degree != 2 && stats) ++stats->singular_fallbacks;
        out[i] = fitted;
    }
    return out;
}

ContourPolyline smooth_contour(const ContourPolyline& c, const SmoothingParams& p,
                               SmoothStats* stats) {
    const int n = static_cast<int>(c.points.size());
    if (n < 5) throw TooFewPoints("contour smoothing needs at least 5 points");
    const int w = smoothing_window(p.span, n);

    std::vector<double> xs(c.points.size()), ys(c.points.size());
    for (size_t i = 0; i < c.points.size(); ++i) {
        xs[i] = c.points[i].x;
        ys[i] = c.points[i].y;
    }
    xs = smooth_cyclic(xs, w, p.method, stats);
    ys = smooth_cyclic(ys, w, p.method, stats);

    ContourPolyline out;
    out.orientation = c.orientation;
    out.points.resize(c.points.size());
    for (size_t i = 0; i < out.points.size(); ++i) out.points[i] = {xs[i], ys[i]};
    return out;
}

ContourPolyline resample_closed(const ContourPolyline& c, int n_target) {
    if (n_target < 3) throw InvalidParam("resampling needs n_target >= 3");
    const size_t n = c.points.size();
    if (n < 2) throw DegenerateContour("cannot resample a contour with fewer than 2 points");

    std::vector<double> cum(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i)
        cum[i + 1] = cum[i] + dist(c.points[i], c.points[(i + 1) % n]);
    const double total = cum[n];
    if (total <= 0.0) throw DegenerateContour("contour has zero perimeter");

    ContourPolyline out;
    out.orientation = c.orientation;
    out.points.resize(static_cast<size_t>(n_target));
    size_t seg = 0;
    for (int m = 0; m < n_target; ++m) {
        const double s = total * static_cast<double>(m) / n_target;
        while (seg + 1 < n && cum[seg + 1] <= s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        const Vec2 a = c.points[seg];
        const Vec2 b = c.points[(seg + 1) % n];
        out.points[static_cast<size_t>(m)] = a + (b - a) * t;
    }
    return out;
}

}  // namespace ct2stl
