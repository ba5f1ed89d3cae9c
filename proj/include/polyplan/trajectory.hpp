#pragma once

#include <vector>

#include "polyplan/vec.hpp"

namespace polyplan {

// One unconstrained arc: p(t) = a3 t^3 + a2 t^2 + a1 t + a0 with the
// coefficients expressed in absolute time, valid on [t_start, t_end].
struct CubicArc {
    Vec2 a3{0.0, 0.0};
    Vec2 a2{0.0, 0.0};
    Vec2 a1{0.0, 0.0};
    Vec2 a0{0.0, 0.0};
    double t_start = 0.0;
    double t_end = 0.0;

    Vec2 position(double t) const { return ((a3 * t + a2) * t + a1) * t + a0; }
    Vec2 velocity(double t) const { return (3.0 * a3 * t + 2.0 * a2) * t + a1; }
    Vec2 control(double t) const { return 6.0 * a3 * t + 2.0 * a2; }
    Vec2 control_rate() const { return 6.0 * a3; }
};

struct ArcState {
    Vec2 p;
    Vec2 v;
    Vec2 u;
    Vec2 u_dot;
};

// State at absolute time t; throws std::out_of_range outside [t_start, t_end].
ArcState eval(const CubicArc& arc, double t);

// Unique cubic matching the position/velocity boundary pairs.
// Throws std::invalid_argument when tf <= t0.
CubicArc hermite_arc(const Vec2& p0, const Vec2& v0, const Vec2& pf, const Vec2& vf,
                     double t0, double tf);

// Closed-form 1/2 * integral of |u|^2 over the arc interval.
double arc_energy(const CubicArc& arc);

// Rebase coefficients given in local time s = t - t_start to absolute time.
CubicArc arc_from_local(const Vec2& a3, const Vec2& a2, const Vec2& a1, const Vec2& a0,
                        double t_start, double t_end);

struct Junction {
    int vertex = -1;  // environment vertex index; -1 for free waypoints
    double time = 0.0;
};

// Piecewise-cubic trajectory. Arcs abut exactly in time; the junction list
// has one entry between each pair of consecutive arcs.
struct Trajectory {
    std::vector<CubicArc> arcs;
    std::vector<Junction> junctions;

    double t_start() const { return arcs.empty() ? 0.0 : arcs.front().t_start; }
    double t_end() const { return arcs.empty() ? 0.0 : arcs.back().t_end; }

    // Evaluates the arc whose interval contains t (earlier arc at junctions).
    ArcState at(double t) const;
};

double trajectory_energy(const Trajectory& traj);

}  // namespace polyplan
