#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyplan/feasibility.hpp"

namespace polyplan::oracles {

namespace {

double qp_axis(double p0, double v0, double pf, double vf, double T, int steps) {
    const int n = steps;
    const double dt = T / n;
    // Exact discrete dynamics per step: v+ = v + u dt, p+ = p + v dt + u dt^2/2.
    // Constraints on the stacked control: a.u = vf - v0, b.u = pf - p0 - v0 T.
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        a[static_cast<size_t>(k)] = dt;
        b[static_cast<size_t>(k)] = dt * dt * (static_cast<double>(n - k) - 0.5);
    }
    const double alpha = vf - v0;
    const double beta = pf - p0 - v0 * T;

    double aa = 0.0, ab = 0.0, bb = 0.0;
    for (int k = 0; k < n; ++k) {
        aa += a[static_cast<size_t>(k)] * a[static_cast<size_t>(k)];
        ab += a[static_cast<size_t>(k)] * b[static_cast<size_t>(k)];
        bb += b[static_cast<size_t>(k)] * b[static_cast<size_t>(k)];
    }
    // Minimize 1/2 dt |u|^2 subject to the two constraints: u = (l1 a + l2 b)/dt
    // with the 2x2 Gram system (1/dt) G l = rhs.
    const double det = aa * bb - ab * ab;
    const double l1 = (bb * alpha - ab * beta) / det;
    const double l2 = (aa * beta - ab * alpha) / det;
    double cost = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = l1 * a[static_cast<size_t>(k)] + l2 * b[static_cast<size_t>(k)];
        cost += u * u;
    }
    return 0.5 * cost / dt;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double qp_min_energy(const Vec2& p0, const Vec2& v0, const Vec2& pf, const Vec2& vf, double T,
                     int steps) {
    return qp_axis(p0.x(), v0.x(), pf.x(), vf.x(), T, steps) +
           qp_axis(p0.y(), v0.y(), pf.y(), vf.y(), T, steps);
}

double quadrature_arc_energy(const CubicArc& arc, double tol) {
    const auto f = [&](double t) { return 0.5 * arc.control(t).squaredNorm(); };
    const double a = arc.t_start;
    const double b = arc.t_end;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

std::vector<double> dense_line_crossings(const CubicArc& arc, const Vec2& c1, const Vec2& c2,
                                         int samples) {
    const Vec2 e = c2 - c1;
    const auto side = [&](double t) { return cross2(arc.position(t) - c1, e); };
    std::vector<double> roots;
    const double dt = (arc.t_end - arc.t_start) / samples;
    double prev_t = arc.t_start;
    double prev_s = side(prev_t);
    if (prev_s == 0.0) roots.push_back(prev_t);
    for (int i = 1; i <= samples; ++i) {
        const double t = arc.t_start + i * dt;
        const double s = side(t);
        if (s == 0.0) {
            roots.push_back(t);
        } else if (prev_s != 0.0 && std::signbit(s) != std::signbit(prev_s)) {
            double lo = prev_t, hi = t, flo = prev_s;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = side(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_s = s;
    }
    return roots;
}

double line_distance(const CubicArc& arc, double t, const Vec2& c1, const Vec2& c2) {
    const Vec2 e = c2 - c1;
    return std::fabs(cross2(arc.position(t) - c1, e)) / e.norm();
}

bool densely_free(const CubicArc& arc, const PolygonEnvironment& env, int samples,
                  double skip_near_vertex) {
    for (int i = 0; i <= samples; ++i) {
        const double t =
            arc.t_start + (arc.t_end - arc.t_start) * static_cast<double>(i) / samples;
        const Vec2 p = arc.position(t);
        bool near_vertex = false;
        for (const Vec2& v : env.vertices()) {
            if ((p - v).norm() <= skip_near_vertex) {
                near_vertex = true;
                break;
            }
        }
        if (near_vertex) continue;
        if (!env.point_free(p)) return false;
    }
    return true;
}

double golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

namespace {

void enumerate_sequences(int vertex_count, int max_len, std::vector<int>& current,
                         const std::function<void(const std::vector<int>&)>& visit) {
    visit(current);
    if (static_cast<int>(current.size()) == max_len) return;
    for (int k = 0; k < vertex_count; ++k) {
        if (std::find(current.begin(), current.end(), k) != current.end()) continue;
        current.push_back(k);
        enumerate_sequences(vertex_count, max_len, current, visit);
        current.pop_back();
    }
}

}  // namespace

BruteForceResult brute_force_min_distance(const PolygonEnvironment& env,
                                          const BoundaryConditions& bc, int max_len) {
    BruteForceResult best;
    const auto chain_distance = [&](const std::vector<int>& seq) {
        double total = 0.0;
        Vec2 prev = bc.p0;
        for (int idx : seq) {
            total += (env.vertex(idx) - prev).norm();
            prev = env.vertex(idx);
        }
        return total + (bc.pf - prev).norm();
    };

    std::vector<int> current;
    enumerate_sequences(env.vertex_count(), max_len, current, [&](const std::vector<int>& seq) {
        ChainProblem problem{bc, seq, &env};
        const ChainSolution sol = solve_chain(problem);
        if (!trajectory_feasible(sol, seq, env).feasible) return;
        // Completeness boundary: every proper prefix must itself be a
        // feasible prefix, or the search cannot reach this sequence.
        for (size_t len = 1; len < seq.size(); ++len) {
            const std::vector<int> prefix(seq.begin(), seq.begin() + static_cast<long>(len));
            ChainProblem sub{bc, prefix, &env};
            const ChainSolution sub_sol = solve_chain(sub);
            if (!prefix_feasible(sub_sol, prefix, env, static_cast<int>(len)).feasible) return;
        }
        const double d = chain_distance(seq);
        const bool better =
            !best.found || d < best.distance - 1e-12 ||
            (std::fabs(d - best.distance) <= 1e-12 &&
             (seq.size() < best.sequence.size() ||
              (seq.size() == best.sequence.size() && seq < best.sequence)));
        if (better) {
            best.found = true;
            best.sequence = seq;
            best.distance = d;
            best.cost = sol.cost;
        }
    });
    return best;
}

}  // namespace polyplan::oracles
