#pragma once

#include <vector>

#include "polyplan/geometry.hpp"

namespace polyplan::fixtures {

// Axis-aligned square, CCW from the bottom-left corner.
inline PolygonEnvironment square_env(const Vec2& center, double side, double clearance = 0.0) {
    const double h = 0.5 * side;
    std::vector<Vec2> v{center + Vec2(-h, -h), center + Vec2(h, -h), center + Vec2(h, h),
                        center + Vec2(-h, h)};
    return PolygonEnvironment(v, {{0, 1, 2, 3}}, clearance);
}

// L-shaped hexagon with one reflex corner (vertex index 3).
inline PolygonEnvironment l_shape_env(const Vec2& origin = Vec2(0.0, 0.0), double size = 2.0) {
    const double s = size;
    const double h = 0.5 * size;
    std::vector<Vec2> v{origin,
                        origin + Vec2(s, 0.0),
                        origin + Vec2(s, h),
                        origin + Vec2(h, h),
                        origin + Vec2(h, s),
                        origin + Vec2(0.0, s)};
    return PolygonEnvironment(v, {{0, 1, 2, 3, 4, 5}}, 0.0);
}

inline PolygonEnvironment empty_env() { return PolygonEnvironment({}, {}, 0.0); }

inline BoundaryConditions rest_to_rest(const Vec2& p0, const Vec2& pf, double T,
                                       double radius = 0.0) {
    BoundaryConditions bc;
    bc.p0 = p0;
    bc.pf = pf;
    bc.t0 = 0.0;
    bc.tf = T;
    bc.radius = radius;
    return bc;
}

}  // namespace polyplan::fixtures
