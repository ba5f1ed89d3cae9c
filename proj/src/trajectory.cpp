#include "polyplan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyplan {

ArcState eval(const CubicArc& arc, double t) {
    if (t < arc.t_start || t > arc.t_end) {
        throw std::out_of_range("eval: t outside the arc interval");
    }
    return {arc.position(t), arc.velocity(t), arc.control(t), arc.control_rate()};
}

CubicArc hermite_arc(const Vec2& p0, const Vec2& v0, const Vec2& pf, const Vec2& vf,
                     double t0, double tf) {
    const double T = tf - t0;
    if (!(T > 0.0)) {
        throw std::invalid_argument("hermite_arc: tf must exceed t0");
    }
    // Local-time solve of the per-axis 4x4 system, then rebase.
    const Vec2 d = pf - p0 - v0 * T;
    const Vec2 w = vf - v0;
    const Vec2 a2 = (3.0 * d - w * T) / (T * T);
    const Vec2 a3 = (w * T - 2.0 * d) / (T * T * T);
    return arc_from_local(a3, a2, v0, p0, t0, tf);
}

double arc_energy(const CubicArc& arc) {
    const double t0 = arc.t_start;
    const double t1 = arc.t_end;
    // 1/2 * integral of |6 a3 t + 2 a2|^2
    //   = 6 |a3|^2 (t1^3 - t0^3) + 6 a3.a2 (t1^2 - t0^2) + 2 |a2|^2 (t1 - t0).
    return 6.0 * arc.a3.squaredNorm() * (t1 * t1 * t1 - t0 * t0 * t0) +
           6.0 * arc.a3.dot(arc.a2) * (t1 * t1 - t0 * t0) +
           2.0 * arc.a2.squaredNorm() * (t1 - t0);
}

CubicArc arc_from_local(const Vec2& a3, const Vec2& a2, const Vec2& a1, const Vec2& a0,
                        double t_start, double t_end) {
    // p(t) = sum_k aL_k (t - t_start)^k, expanded into absolute powers of t.
    const double s = t_start;
    CubicArc arc;
    arc.a3 = a3;
    arc.a2 = a2 - 3.0 * s * a3;
    arc.a1 = a1 - 2.0 * s * a2 + 3.0 * s * s * a3;
    arc.a0 = a0 - s * a1 + s * s * a2 - s * s * s * a3;
    arc.t_start = t_start;
    arc.t_end = t_end;
    return arc;
}

ArcState Trajectory::at(double t) const {
    if (arcs.empty()) throw std::out_of_range("empty trajectory");
    if (t < t_start() || t > t_end()) {
        throw std::out_of_range("trajectory evaluation outside the horizon");
    }
    auto it = std::lower_bound(arcs.begin(), arcs.end(), t,
                               [](const CubicArc& a, double value) { return a.t_end < value; });
    if (it == arcs.end()) --it;
    return eval(*it, t);
}

double trajectory_energy(const Trajectory& traj) {
    double total = 0.0;
    for (const CubicArc& arc : traj.arcs) total += arc_energy(arc);
    return total;
}

}  // namespace polyplan
