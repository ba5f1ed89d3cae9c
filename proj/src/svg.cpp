#include <cmath>
#include <sstream>

#include "polyplan/io.hpp"

namespace polyplan {

namespace {

// Fixed palette: obstacles light gray with dark outlines, trajectory blue,
// start green circle, goal red star.
constexpr const char* kObstacleFill = "#d0d0d0";
constexpr const char* kObstacleStroke = "#333333";
constexpr const char* kVertexFill = "#555555";
constexpr const char* kTrajectoryStroke = "#0057b8";
constexpr const char* kStartFill = "#2a9d3a";
constexpr const char* kGoalFill = "#d62828";

constexpr double kPixelsPerMeter = 50.0;
constexpr double kMarginMeters = 0.5;

struct Mapper {
    double min_x, max_y;
    double px(double x) const { return (x - min_x + kMarginMeters) * kPixelsPerMeter; }
    double py(double y) const { return (max_y - y + kMarginMeters) * kPixelsPerMeter; }
};

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void star_path(std::ostringstream& out, const Mapper& m, const Vec2& center, double radius_m) {
    // Five-pointed star, outer/inner radius 1 : 0.4, first point up.
    out << "<path fill=\"" << kGoalFill << "\" d=\"";
    for (int i = 0; i < 10; ++i) {
        const double r = (i % 2 == 0) ? radius_m : 0.4 * radius_m;
        const double ang = -M_PI / 2.0 + i * M_PI / 5.0;
        const double x = center.x() + r * std::cos(ang);
        const double y = center.y() - r * std::sin(ang);
        out << (i == 0 ? 'M' : 'L') << fmt_px(m.px(x)) << ' ' << fmt_px(m.py(y));
    }
    out << "Z\"/>\n";
}

}  // namespace

std::string plan_to_svg(const PolygonEnvironment& env, const BoundaryConditions& bc,
                        const Trajectory* traj, double rate_hz) {
    Vec2 lo, hi;
    env.bounds(lo, hi);
    lo = lo.cwiseMin(bc.p0).cwiseMin(bc.pf);
    hi = hi.cwiseMax(bc.p0).cwiseMax(bc.pf);
    const Mapper m{lo.x(), hi.y()};
    const double width = (hi.x() - lo.x() + 2.0 * kMarginMeters) * kPixelsPerMeter;
    const double height = (hi.y() - lo.y() + 2.0 * kMarginMeters) * kPixelsPerMeter;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_px(width) << "\" height=\""
        << fmt_px(height) << "\" viewBox=\"0 0 " << fmt_px(width) << ' ' << fmt_px(height)
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (const auto& ring : env.polygons()) {
        out << "<polygon fill=\"" << kObstacleFill << "\" stroke=\"" << kObstacleStroke
            << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < ring.size(); ++i) {
            const Vec2& v = env.vertex(ring[i]);
            out << (i ? " " : "") << fmt_px(m.px(v.x())) << ',' << fmt_px(m.py(v.y()));
        }
        out << "\"/>\n";
    }
    for (const Vec2& v : env.vertices()) {
        out << "<circle cx=\"" << fmt_px(m.px(v.x())) << "\" cy=\"" << fmt_px(m.py(v.y()))
            << "\" r=\"2\" fill=\"" << kVertexFill << "\"/>\n";
    }

    if (traj != nullptr && !traj->arcs.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << kTrajectoryStroke
            << "\" stroke-width=\"2\" points=\"";
        const double t0 = traj->t_start();
        const double tf = traj->t_end();
        const double dt = 1.0 / rate_hz;
        bool first = true;
        for (double t = t0;; t += dt) {
            const double tc = std::min(t, tf);
            const Vec2 p = traj->at(tc).p;
            out << (first ? "" : " ") << fmt_px(m.px(p.x())) << ',' << fmt_px(m.py(p.y()));
            first = false;
            if (tc >= tf) break;
        }
        out << "\"/>\n";
    }

    out << "<circle cx=\"" << fmt_px(m.px(bc.p0.x())) << "\" cy=\"" << fmt_px(m.py(bc.p0.y()))
        << "\" r=\"" << fmt_px(0.12 * kPixelsPerMeter) << "\" fill=\"" << kStartFill << "\"/>\n";
    star_path(out, m, bc.pf, 0.18);
    out << "</svg>\n";
    return out.str();
}

void save_plan_svg(const PolygonEnvironment& env, const BoundaryConditions& bc,
                   const Trajectory* traj, const std::string& path, double rate_hz) {
    write_text_file(path, plan_to_svg(env, bc, traj, rate_hz));
}

}  // namespace polyplan
