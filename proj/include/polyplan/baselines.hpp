#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyplan/bvp_solver.hpp"
#include "polyplan/geometry.hpp"

namespace polyplan {

// Collision-free polyline between the endpoints.
struct WaypointPath {
    std::vector<Vec2> waypoints;  // includes p0 and pf
    double length = 0.0;
};

struct SampleDomain {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{10.0, 10.0};
    double diagonal() const { return (hi - lo).norm(); }
};

struct RrtStarConfig {
    int node_budget = 2500;
    double steer_radius = 0.5;         // m
    double rewire_gamma_scale = 1.5;   // gamma = scale * domain diagonal
    double goal_bias = 0.05;
    std::uint64_t seed = 0;
};

struct PrmConfig {
    int node_budget = 2500;
    int k_neighbors = 10;
    std::uint64_t seed = 0;
};

// Straight-line-steering RRT* with rewiring; the returned path is shortcut
// smoothed. Empty optional when no connection is found within the budget.
std::optional<WaypointPath> rrt_star(const PolygonEnvironment& env, const Vec2& p0, const Vec2& pf,
                                     const SampleDomain& domain, const RrtStarConfig& config);

// Probabilistic roadmap: k-nearest connections, Euclidean shortest path.
std::optional<WaypointPath> prm(const PolygonEnvironment& env, const Vec2& p0, const Vec2& pf,
                                const SampleDomain& domain, const PrmConfig& config);

// Chain solve through the path's interior waypoints, ignoring feasibility: a
// lower bound on the energy of any trajectory through those waypoints.
// Returns the flagged chain solution (check .converged).
ChainSolution energy_lower_bound(const WaypointPath& path, const BoundaryConditions& bc,
                                 const SolverOptions& opts = {});

}  // namespace polyplan
