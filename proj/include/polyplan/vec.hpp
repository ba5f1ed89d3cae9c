#pragma once

#include <Eigen/Dense>

namespace polyplan {

using Vec2 = Eigen::Vector2d;

// z-component of the 3-D cross product of two planar vectors.
inline double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

// Rotate by -90 degrees: maps a CCW edge tangent to the outward normal.
inline Vec2 rotate_cw(const Vec2& v) {
    return Vec2(v.y(), -v.x());
}

}  // namespace polyplan
