#pragma once

#include "ct2stl/geometry.hpp"

namespace ct2stl {

/// Sign of the orientation determinant: +1 when (a, b, c) turn CCW, -1 when
/// CW, 0 when collinear. Evaluated with a floating-point filter and an exact
/// rational fallback.
int orient2d_sign(Vec2 a, Vec2 b, Vec2 c);

/// Sign of the incircle determinant: +1 when d lies strictly inside the
/// circumcircle of the CCW triangle (a, b, c), -1 outside, 0 cocircular.
int incircle_sign(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// incircle_sign with cocircular ties resolved symbolically: the point with
/// the lowest index is treated as lowered on the lifting paraboloid, so ties
/// resolve toward diagonals incident to the lowest-indexed vertex. Never
/// returns 0 for four distinct points.
int incircle_sign_perturbed(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic, Vec2 d, int id);

}  // namespace ct2stl
