#pragma once

#include <Eigen/Dense>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

#include "polyplan/geometry.hpp"
#include "polyplan/trajectory.hpp"

namespace polyplan {

// One interior point the trajectory must pass through. A stop junction pins
// the velocity to zero there (contact at a reflex vertex); otherwise the
// tangential velocity stays free and the scalar optimality residual applies.
struct JunctionSpec {
    Vec2 position{0.0, 0.0};
    bool stop = false;
};

// Candidate vertex chain through an environment.
struct ChainProblem {
    BoundaryConditions bc;
    std::vector<int> sequence;
    const PolygonEnvironment* env = nullptr;
};

struct SolverOptions {
    // Minimum junction-time separation as a fraction of the horizon.
    double time_epsilon_rel = 1e-6;
    // Residual tolerance, relative to max(1, normalized energy).
    double residual_tol = 1e-9;
    int max_iterations = 50;
    // Try distance-proportional and uniform initializations (plus the warm
    // start when given) and keep the cheapest converged solution.
    bool multi_start = true;
    std::vector<double> warm_start;  // absolute junction times
    std::ostream* trace = nullptr;   // JSON-lines iteration log
};

struct ChainSolution {
    std::vector<double> junction_times;  // absolute, strictly increasing
    std::vector<CubicArc> arcs;          // sequence.size() + 1 arcs
    double cost = std::numeric_limits<double>::quiet_NaN();
    double max_residual = std::numeric_limits<double>::infinity();  // normalized horizon
    bool converged = false;
    int iterations = 0;
    int linear_solves = 0;
};

// Block-linear junction system A(times) c = z of size 8(n+1): 8 boundary rows
// plus 8 rows per junction (both-side position, velocity and control
// continuity; velocity pinned to zero on both sides at stop junctions).
// Assembled in the caller's time frame. Throws std::invalid_argument unless
// bc.t0 < times_1 < ... < times_n < bc.tf strictly.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_linear_system(
    const BoundaryConditions& bc, const std::vector<JunctionSpec>& junctions,
    const std::vector<double>& times);

// Coefficient solve at fixed junction times (normalized internally).
// Throws ConditioningError when adjacent times are closer than
// time_epsilon_rel * horizon, or when the reconstruction residual exceeds
// 1e-8 * |z|_inf.
std::vector<CubicArc> solve_coefficients(const BoundaryConditions& bc,
                                         const std::vector<JunctionSpec>& junctions,
                                         const std::vector<double>& times,
                                         const SolverOptions& opts = {});

// Scalar optimality residual per junction, evaluated on the normalized
// horizon: 6 (a3- minus a3+) . v at free junctions, the Hamiltonian gap
// (|u-|^2 - |u+|^2) / 2 at stop junctions.
std::vector<double> junction_residuals(const BoundaryConditions& bc,
                                       const std::vector<JunctionSpec>& junctions,
                                       const std::vector<double>& times,
                                       const SolverOptions& opts = {});

// Finds junction times zeroing every residual with damped Newton (central
// finite-difference Jacobian, iterates projected to the ordered-time set).
// Non-convergence is reported through the flag, never thrown.
ChainSolution solve_chain(const BoundaryConditions& bc, const std::vector<JunctionSpec>& junctions,
                          const SolverOptions& opts = {});

// Environment-sequence wrappers. Junction specs take the vertex embedding
// and convexity from the environment (reflex vertices become stops).
std::vector<JunctionSpec> junctions_from_sequence(const PolygonEnvironment& env,
                                                  const std::vector<int>& sequence);
ChainSolution solve_chain(const ChainProblem& problem, const SolverOptions& opts = {});

// Assembles the arcs plus junction metadata into a Trajectory. The sequence
// supplies vertex indices; pass an empty sequence for waypoint chains.
Trajectory chain_trajectory(const ChainSolution& solution, const std::vector<int>& sequence = {});

}  // namespace polyplan
