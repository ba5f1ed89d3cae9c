#pragma once

#include <string>
#include <vector>

#include "polyplan/geometry.hpp"
#include "polyplan/planner.hpp"
#include "polyplan/trajectory.hpp"

namespace polyplan {

// Environment file schema:
//   { "vertices": [[x, y], ...], "polygons": [[i, j, k, ...], ...],
//     "clearance": meters }
// Indices are 0-based, rings CCW. The loader validates every environment
// invariant and reports the first violation; parse errors carry line/column.
PolygonEnvironment load_environment(const std::string& path);
PolygonEnvironment parse_environment(const std::string& json_text);
void save_environment(const PolygonEnvironment& env, const std::string& path);
std::string environment_to_json(const PolygonEnvironment& env);

// Trajectory JSON: raw coefficients with absolute junction times.
std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& json_text);
void save_trajectory_json(const Trajectory& traj, const std::string& path);
Trajectory load_trajectory_json(const std::string& path);

// Trajectory CSV: columns t, px, py, vx, vy, ux, uy sampled uniformly at
// `rate` Hz (final row pinned to tf), 17-significant-digit decimals.
std::string trajectory_to_csv(const Trajectory& traj, double rate_hz = 1000.0);
void save_trajectory_csv(const Trajectory& traj, const std::string& path,
                         double rate_hz = 1000.0);

// Plan overlay SVG: obstacles, vertices, trajectory polyline, start circle,
// goal star. 1 m = 50 px, y axis flipped.
std::string plan_to_svg(const PolygonEnvironment& env, const BoundaryConditions& bc,
                        const Trajectory* traj, double rate_hz = 1000.0);
void save_plan_svg(const PolygonEnvironment& env, const BoundaryConditions& bc,
                   const Trajectory* traj, const std::string& path, double rate_hz = 1000.0);

// 17-significant-digit decimal formatting (round-trips doubles exactly).
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace polyplan
