#pragma once

#include <vector>

#include "ct2stl/contour.hpp"

namespace ct2stl {

enum class SmoothMethod {
    MovingAverage,
    Loess2,  // locally weighted least squares, degree-2 polynomial
};

struct SmoothingParams {
    double span = 0.1;  // fraction of points per window, in (0, 1)
    SmoothMethod method = SmoothMethod::Loess2;
};

struct SmoothStats {
    int singular_fallbacks = 0;  // windows where the quadratic fit degraded
};

/// Window size derived from the span: round(span * n), forced odd upward,
/// clamped to [3, n].
int smoothing_window(double span, int n);

/// Smooth one coordinate sequence of a closed contour. Window membership and
/// the tricube weights wrap around the closure; the regression abscissa is
/// each sample's index, so index-polynomial sequences of degree <= 2 are
/// reproduced exactly. Rank-deficient fits degrade to degree 1, then to the
/// weighted window mean, counted in `stats`.
std::vector<double> smooth_cyclic(const std::vector<double>& values, int window,
                                  SmoothMethod method, SmoothStats* stats = nullptr);

/// Apply smooth_cyclic to x and y independently. Keeps point count,
/// closedness and orientation.
ContourPolyline smooth_contour(const ContourPolyline& c, const SmoothingParams& p,
                               SmoothStats* stats = nullptr);

/// n_target points uniformly spaced by arc length along the closed polyline,
/// starting at the current start point.
ContourPolyline resample_closed(const ContourPolyline& c, int n_target);

}  // namespace ct2stl
