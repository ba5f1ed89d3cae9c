#pragma once

#include <cstdint>

#include "polyplan/geometry.hpp"

namespace polyplan {

struct EnvGenConfig {
    std::uint64_t seed = 0;
    double domain_width = 10.0;   // m
    double domain_height = 10.0;  // m
    int point_count = 50;
    int cluster_count = 12;
    double endpoint_clearance = 1.0;   // m, points this close to p0/pf are dropped
    double obstacle_clearance = 0.2;   // m, minimum spacing between obstacles (2R)
    int max_attempts = 64;
};

// Seeded random obstacle field: uniform points in the domain (minus endpoint
// disks), k-means partition into cluster_count groups, convex hull of every
// cluster with at least three points. Regenerates (bounded) until the
// clearance and endpoint-freeness checks hold; throws ValidationError when
// the attempt budget runs out. Deterministic per (config, p0, pf).
PolygonEnvironment generate_environment(const EnvGenConfig& config, const Vec2& p0,
                                        const Vec2& pf);

// Andrew monotone chain; returns the hull CCW with collinear points dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

}  // namespace polyplan
