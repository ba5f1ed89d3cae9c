#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyplan/bvp_solver.hpp"
#include "polyplan/geometry.hpp"
#include "polyplan/trajectory.hpp"

namespace polyplan {

enum class CrossingKind {
    InteriorCrossing,    // lambda strictly inside the edge
    VertexContactStart,  // at the face's first vertex (lambda 0)
    VertexContactEnd,    // at the face's second vertex (lambda 1)
};

struct CrossingEvent {
    double time = 0.0;   // absolute, within the arc interval
    int face = -1;
    double lambda = 0.0; // edge parameter in [0, 1], 0 at the first vertex
    CrossingKind kind = CrossingKind::InteriorCrossing;
    int vertex = -1;     // contacted vertex for the vertex-contact kinds
};

// The arc tracks the edge line for its whole interval; crossing_times cannot
// produce isolated events. arc_feasible resolves it by interval containment.
class DegenerateOverlapError : public std::runtime_error {
  public:
    explicit DegenerateOverlapError(const std::string& msg) : std::runtime_error(msg) {}
};

// Real roots of the arc/edge-line crossing cubic inside the arc interval,
// after Newton polish; no edge-parameter filtering. Exposed for oracle tests.
std::vector<double> crossing_roots(const CubicArc& arc, const PolygonEnvironment& env, int face);

// Crossing events on face k: closed-form cubic roots, filtered to the arc
// interval and to edge parameters within 1e-9 of [0, 1], classified as
// interior crossings or vertex contacts. Roots closer than 1e-9 s merge.
// Throws DegenerateOverlapError when the cubic vanishes identically.
std::vector<CrossingEvent> crossing_times(const CubicArc& arc, const PolygonEnvironment& env,
                                          int face);

// Contact legality: at a convex vertex the velocity must leave through one of
// the incident half-spaces; at a reflex vertex it must vanish.
bool vertex_contact_legal(const PolygonEnvironment& env, int vertex, const Vec2& velocity);

struct Violation {
    int face = -1;
    double time = 0.0;
    double lambda = 0.0;
    std::string reason;
};

struct FeasibilityResult {
    bool feasible = true;
    std::optional<Violation> violation;
};

// True iff the arc produces no interior crossing on any face and every vertex
// contact happens at an allowed vertex with legal contact velocity.
FeasibilityResult arc_feasible(const CubicArc& arc, const PolygonEnvironment& env,
                               const std::vector<int>& allowed_vertices);

// Feasible-prefix test: every arc ending at or before junction
// `window_junctions` passes arc_feasible, with the chain's own vertices as
// the allowed contacts. Unconverged solutions are infeasible by policy.
FeasibilityResult prefix_feasible(const ChainSolution& solution, const std::vector<int>& sequence,
                                  const PolygonEnvironment& env, int window_junctions);

// Full-horizon test (all arcs through tf); the planner's acceptance check.
FeasibilityResult trajectory_feasible(const ChainSolution& solution,
                                      const std::vector<int>& sequence,
                                      const PolygonEnvironment& env);

}  // namespace polyplan
