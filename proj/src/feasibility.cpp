#include "polyplan/feasibility.hpp"

#include <algorithm>
#include <cmath>

#include "polyplan/cubic_roots.hpp"

namespace polyplan {

namespace {

constexpr double kVelocityTol = 1e-6;   // m/s, half-space and stop tests
constexpr double kLambdaTol = 1e-9;     // edge-parameter clamping window
constexpr double kRootMergeTol = 1e-9;  // s
constexpr double kVertexRegion = 1e-7;  // m, endpoint-contact classification
constexpr double kTimeSlack = 1e-9;     // s, root-in-interval slack

struct CrossingCubic {
    double c3, c2, c1, c0;
    double scale;  // magnitude reference for the degeneracy test
};

CrossingCubic crossing_cubic(const CubicArc& arc, const PolygonEnvironment& env, int face) {
    const Face& f = env.face(face);
    const Vec2 e = env.vertex(f.v_second) - env.vertex(f.v_first);
    CrossingCubic q;
    q.c3 = cross2(arc.a3, e);
    q.c2 = cross2(arc.a2, e);
    q.c1 = cross2(arc.a1, e);
    q.c0 = cross2(arc.a0 - env.vertex(f.v_first), e);

    const double tm = std::max({1.0, std::fabs(arc.t_start), std::fabs(arc.t_end)});
    const double pos_bound = arc.a3.norm() * tm * tm * tm + arc.a2.norm() * tm * tm +
                             arc.a1.norm() * tm + (arc.a0 - env.vertex(f.v_first)).norm();
    q.scale = e.norm() * std::max(pos_bound, 1e-12);
    return q;
}

bool cubic_identically_zero(const CrossingCubic& q, double t_hi) {
    const double tm = std::max(1.0, t_hi);
    const double mag = std::max({std::fabs(q.c3) * tm * tm * tm, std::fabs(q.c2) * tm * tm,
                                 std::fabs(q.c1) * tm, std::fabs(q.c0)});
    return mag <= 1e-12 * q.scale;
}

}  // namespace

std::vector<double> crossing_roots(const CubicArc& arc, const PolygonEnvironment& env, int face) {
    const CrossingCubic q = crossing_cubic(arc, env, face);
    const double t_hi = std::max(std::fabs(arc.t_start), std::fabs(arc.t_end));
    if (cubic_identically_zero(q, t_hi)) {
        throw DegenerateOverlapError("arc lies along the line of face " + std::to_string(face));
    }

    std::array<double, 3> raw{};
    const int count = solve_cubic(q.c3, q.c2, q.c1, q.c0, raw);
    std::vector<double> roots;
    for (int i = 0; i < count; ++i) {
        double t = polish_cubic_root(q.c3, q.c2, q.c1, q.c0, raw[static_cast<size_t>(i)]);
        if (t < arc.t_start - kTimeSlack || t > arc.t_end + kTimeSlack) continue;
        t = std::clamp(t, arc.t_start, arc.t_end);
        if (!roots.empty() && std::fabs(t - roots.back()) <= kRootMergeTol) continue;
        roots.push_back(t);
    }
    return roots;
}

std::vector<CrossingEvent> crossing_times(const CubicArc& arc, const PolygonEnvironment& env,
                                          int face) {
    const Face& f = env.face(face);
    const Vec2& c1 = env.vertex(f.v_first);
    const Vec2& c2 = env.vertex(f.v_second);
    const Vec2 e = c2 - c1;

    std::vector<CrossingEvent> events;
    for (double t : crossing_roots(arc, env, face)) {
        const Vec2 p = arc.position(t);
        // Extract lambda from the better-conditioned component equation.
        const double lambda = (std::fabs(e.x()) >= std::fabs(e.y())) ? (p.x() - c1.x()) / e.x()
                                                                     : (p.y() - c1.y()) / e.y();
        if (lambda < -kLambdaTol || lambda > 1.0 + kLambdaTol) continue;

        CrossingEvent ev;
        ev.time = t;
        ev.face = face;
        ev.lambda = std::clamp(lambda, 0.0, 1.0);
        const double d_first = (p - c1).norm();
        const double d_second = (p - c2).norm();
        if (d_first <= kVertexRegion) {
            ev.kind = CrossingKind::VertexContactStart;
            ev.vertex = f.v_first;
        } else if (d_second <= kVertexRegion) {
            ev.kind = CrossingKind::VertexContactEnd;
            ev.vertex = f.v_second;
        } else {
            ev.kind = CrossingKind::InteriorCrossing;
        }
        events.push_back(ev);
    }
    return events;
}

bool vertex_contact_legal(const PolygonEnvironment& env, int vertex, const Vec2& velocity) {
    if (env.vertex_convexity(vertex) == VertexKind::Reflex) {
        return velocity.norm() <= kVelocityTol;
    }
    const auto [k_in, k_out] = env.incident_faces(vertex);
    return velocity.dot(env.face(k_in).normal) >= -kVelocityTol ||
           velocity.dot(env.face(k_out).normal) >= -kVelocityTol;
}

namespace {

// Degenerate collinear overlap: bound the tangential projection of the arc
// over its interval and intersect with [0, face length].
FeasibilityResult resolve_degenerate_overlap(const CubicArc& arc, const PolygonEnvironment& env,
                                             int face, const std::vector<int>& allowed) {
    const Face& f = env.face(face);
    const Vec2& c1 = env.vertex(f.v_first);

    const double q3 = arc.a3.dot(f.tangent);
    const double q2 = arc.a2.dot(f.tangent);
    const double q1 = arc.a1.dot(f.tangent);
    const double q0 = (arc.a0 - c1).dot(f.tangent);
    const auto proj = [&](double t) { return ((q3 * t + q2) * t + q1) * t + q0; };

    std::vector<double> candidates{arc.t_start, arc.t_end};
    // Critical points of the projection cubic.
    std::array<double, 3> crit{};
    const int nc = solve_cubic(0.0, 3.0 * q3, 2.0 * q2, q1, crit);
    for (int i = 0; i < std::max(nc, 0); ++i) {
        if (crit[static_cast<size_t>(i)] > arc.t_start && crit[static_cast<size_t>(i)] < arc.t_end) {
            candidates.push_back(crit[static_cast<size_t>(i)]);
        }
    }
    double p_min = proj(candidates[0]), p_max = p_min;
    double t_min = candidates[0], t_max = candidates[0];
    for (double t : candidates) {
        const double v = proj(t);
        if (v < p_min) { p_min = v; t_min = t; }
        if (v > p_max) { p_max = v; t_max = t; }
    }

    const double lo = std::max(p_min, 0.0);
    const double hi = std::min(p_max, f.length);
    if (hi - lo > 1e-9) {
        return {false, Violation{face, t_min, std::clamp(lo / f.length, 0.0, 1.0),
                                 "degenerate overlap with the face"}};
    }
    if (hi < lo) return {};  // overlap region empty

    // Overlap collapses to (at most) one of the face's endpoints.
    const bool at_first = hi <= kVertexRegion;
    const int vertex = at_first ? f.v_first : f.v_second;
    const double t_contact = at_first ? ((p_min >= 0.0) ? t_min : t_max)
                                      : ((p_max <= f.length) ? t_max : t_min);
    if (std::find(allowed.begin(), allowed.end(), vertex) == allowed.end()) {
        return {false, Violation{face, t_contact, at_first ? 0.0 : 1.0,
                                 "contact at vertex " + std::to_string(vertex) +
                                     " which is not part of the chain"}};
    }
    if (!vertex_contact_legal(env, vertex, arc.velocity(t_contact))) {
        return {false, Violation{face, t_contact, at_first ? 0.0 : 1.0,
                                 "illegal contact velocity at vertex " + std::to_string(vertex)}};
    }
    return {};
}

}  // namespace

FeasibilityResult arc_feasible(const CubicArc& arc, const PolygonEnvironment& env,
                               const std::vector<int>& allowed_vertices) {
    for (int k = 0; k < env.face_count(); ++k) {
        std::vector<CrossingEvent> events;
        try {
            events = crossing_times(arc, env, k);
        } catch (const DegenerateOverlapError&) {
            const FeasibilityResult r = resolve_degenerate_overlap(arc, env, k, allowed_vertices);
            if (!r.feasible) return r;
            continue;
        }
        for (const CrossingEvent& ev : events) {
            if (ev.kind == CrossingKind::InteriorCrossing) {
                return {false, Violation{k, ev.time, ev.lambda, "crossing through face interior"}};
            }
            if (std::find(allowed_vertices.begin(), allowed_vertices.end(), ev.vertex) ==
                allowed_vertices.end()) {
                return {false, Violation{k, ev.time, ev.lambda,
                                         "contact at vertex " + std::to_string(ev.vertex) +
                                             " which is not part of the chain"}};
            }
            if (!vertex_contact_legal(env, ev.vertex, arc.velocity(ev.time))) {
                return {false, Violation{k, ev.time, ev.lambda,
                                         "illegal contact velocity at vertex " +
                                             std::to_string(ev.vertex)}};
            }
        }
    }
    return {};
}

FeasibilityResult prefix_feasible(const ChainSolution& solution, const std::vector<int>& sequence,
                                  const PolygonEnvironment& env, int window_junctions) {
    if (!solution.converged) {
        return {false, Violation{-1, 0.0, 0.0, "chain solve did not converge"}};
    }
    const int arcs_to_check =
        std::min<int>(window_junctions, static_cast<int>(solution.junction_times.size()));
    for (int j = 0; j < arcs_to_check; ++j) {
        const FeasibilityResult r = arc_feasible(solution.arcs[static_cast<size_t>(j)], env, sequence);
        if (!r.feasible) return r;
    }
    return {};
}

FeasibilityResult trajectory_feasible(const ChainSolution& solution,
                                      const std::vector<int>& sequence,
                                      const PolygonEnvironment& env) {
    if (!solution.converged) {
        return {false, Violation{-1, 0.0, 0.0, "chain solve did not converge"}};
    }
    for (const CubicArc& arc : solution.arcs) {
        const FeasibilityResult r = arc_feasible(arc, env, sequence);
        if (!r.feasible) return r;
    }
    return {};
}

}  // namespace polyplan
