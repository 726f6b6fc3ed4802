#include "ct2stl/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>

namespace ct2stl {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Shewchuk's static filter constants; eps is half the double machine epsilon.
constexpr double kEps = 1.1102230246251565e-16;
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const Rational& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

int orient2d_exact(Vec2 a, Vec2 b, Vec2 c) {
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    return sign_of((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
}

int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Rational adx = Rational(a.x) - Rational(d.x);
    const Rational ady = Rational(a.y) - Rational(d.y);
    const Rational bdx = Rational(b.x) - Rational(d.x);
    const Rational bdy = Rational(b.y) - Rational(d.y);
    const Rational cdx = Rational(c.x) - Rational(d.x);
    const Rational cdy = Rational(c.y) - Rational(d.y);
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace

int orient2d_sign(Vec2 a, Vec2 b, Vec2 c) {
    const double detleft = (b.x - a.x) * (c.y - a.y);
    const double detright = (b.y - a.y) * (c.x - a.x);
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    if (std::abs(det) > kCcwErrBound * detsum) return det > 0.0 ? 1 : -1;
    return orient2d_exact(a, b, c);
}

int incircle_sign(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double bxcy = bdx * cdy, cxby = cdx * bdy;
    const double cxay = cdx * ady, axcy = adx * cdy;
    const double axby = adx * bdy, bxay = bdx * ady;
    const double det = alift * (bxcy - cxby) + blift * (cxay - axcy) + clift * (axby - bxay);
    const double permanent = alift * (std::abs(bxcy) + std::abs(cxby)) +
                             blift * (std::abs(cxay) + std::abs(axcy)) +
                             clift * (std::abs(axby) + std::abs(bxay));
    if (std::abs(det) > kIccErrBound * permanent) return det > 0.0 ? 1 : -1;
    return incircle_exact(a, b, c, d);
}

int incircle_sign_perturbed(Vec2 a, int ia, Vec2 b, int ib, Vec2 c, int ic, Vec2 d, int id) {
    const int s = incircle_sign(a, b, c, d);
    if (s != 0) return s;
    // Cocircular. Lower the lowest-indexed point on the paraboloid; the sign
    // becomes -sign of that point's lifted-coordinate cofactor.
    int m = 0;
    int lowest = ia;
    if (ib < lowest) { lowest = ib; m = 1; }
    if (ic < lowest) { lowest = ic; m = 2; }
    if (id < lowest) { lowest = id; m = 3; }
    int cof = 0;
    switch (m) {
        case 0: cof = orient2d_sign(b, c, d); break;
        case 1: cof = -orient2d_sign(a, c, d); break;
        case 2: cof = orient2d_sign(a, b, d); break;
        case 3: cof = -orient2d_sign(a, b, c); break;
    }
    if (cof == 0) throw std::logic_error("degenerate cocircular quadruple");
    return -cof;
}

}  // namespace ct2stl
