#pragma once

// Independent reference computations for the test suites. Everything here
// deliberately avoids the closed-form/library code paths it is used to check:
// the QP oracle discretizes the dynamics directly, the crossing oracle uses
// dense sampling plus bisection, and the enumeration planner searches by
// brute force.

#include <functional>
#include <optional>
#include <vector>

#include "polyplan/bvp_solver.hpp"
#include "polyplan/geometry.hpp"
#include "polyplan/trajectory.hpp"

namespace polyplan::oracles {

// Minimum 1/2 * integral |u|^2 for a double integrator with piecewise-constant
// control on `steps` uniform intervals, meeting the boundary states exactly.
// Any such control is feasible for the continuous problem, so this is an
// upper bound on (and converges to) the continuous optimum.
double qp_min_energy(const Vec2& p0, const Vec2& v0, const Vec2& pf, const Vec2& vf, double T,
                     int steps);

// Adaptive Simpson quadrature of 1/2 |u(t)|^2 over the arc interval.
double quadrature_arc_energy(const CubicArc& arc, double tol = 1e-12);

// Times where the arc crosses the infinite line through (c1, c2): dense
// sampling of the signed side function followed by bisection.
std::vector<double> dense_line_crossings(const CubicArc& arc, const Vec2& c1, const Vec2& c2,
                                         int samples);

// Distance from the arc position at t to the line through (c1, c2).
double line_distance(const CubicArc& arc, double t, const Vec2& c1, const Vec2& c2);

// True iff every sample of the arc at `samples` uniform times is free
// (endpoints excluded when they sit on allowed contact vertices).
bool densely_free(const CubicArc& arc, const PolygonEnvironment& env, int samples,
                  double skip_near_vertex = 1e-6);

// Golden-section minimization of f over [a, b].
double golden_section(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-8);

struct BruteForceResult {
    bool found = false;
    std::vector<int> sequence;
    double distance = 0.0;
    double cost = 0.0;
};

// Exhaustive search over all duplicate-free vertex sequences up to max_len:
// keeps the minimum-distance sequence whose full trajectory is feasible and
// whose every proper prefix is itself a feasible prefix, breaking ties by
// (distance, length, lexicographic order). The environment must already be
// inflated.
BruteForceResult brute_force_min_distance(const PolygonEnvironment& env,
                                          const BoundaryConditions& bc, int max_len);

}  // namespace polyplan::oracles
