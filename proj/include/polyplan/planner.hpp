#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "polyplan/bvp_solver.hpp"
#include "polyplan/feasibility.hpp"
#include "polyplan/geometry.hpp"
#include "polyplan/trajectory.hpp"

namespace polyplan {

enum class PlanMode { MinDistance, MinEnergy };

enum class PlanFailure { None, NoFeasibleSequence, QueueOverflow };

// Candidate vertex chain, keyed by its straight-line distance
//   |S| = |c_1 - p0| + sum |c_i - c_{i-1}| + |pf - c_k|.
struct Prefix {
    std::vector<int> sequence;
    double distance = 0.0;
    double energy_bound = 0.0;  // chain solve cost, valid when solved
    bool solved = false;
    bool window_feasible = false;
    ChainSolution solution;
};

struct PlanStats {
    std::int64_t prefixes_expanded = 0;
    std::int64_t prefixes_popped = 0;
    std::int64_t solver_calls = 0;
    std::int64_t enqueued = 0;
    std::int64_t queue_peak = 0;
    double wall_ms = 0.0;  // filled by the caller
};

struct PlannerConfig {
    PlanMode mode = PlanMode::MinDistance;
    SolverOptions solver;
    std::size_t queue_cap = 1'000'000;
    // Test hook: records pop keys in order when set.
    std::vector<double>* pop_key_trace = nullptr;
};

struct PlanResult {
    bool success = false;
    PlanFailure failure = PlanFailure::None;
    PlanMode mode = PlanMode::MinDistance;
    std::vector<int> sequence;
    Trajectory trajectory;
    double cost = 0.0;
    double distance = 0.0;
    PlanStats stats;
};

// Distance-informed prefix search: a priority queue keyed by |S| is seeded
// with the empty prefix and every single vertex; the popped minimum is
// recorded when its full trajectory is feasible, and is otherwise-regardless
// expanded by every unused vertex, enqueuing children that are feasible
// prefixes. Stops when the queue empties or the minimum key reaches the
// incumbent distance. The robot radius is folded in by inflating the
// environment once up front; throws ValidationError/invalid_argument when the
// inflated environment or the endpoints are invalid.
PlanResult plan_min_distance(const PolygonEnvironment& env, const BoundaryConditions& bc,
                             const PlannerConfig& config = {});

// Energy pass: re-keys the prefixes surviving the distance search by their
// chain-solve energy lower bound, prunes bounds above the incumbent cost, and
// continues best-first by bound until the minimum bound reaches the incumbent.
PlanResult plan_min_energy(const PolygonEnvironment& env, const BoundaryConditions& bc,
                           const PlannerConfig& config = {});

// Runs the distance search on the time-reversed problem and maps the winning
// sequence back to forward time.
PlanResult plan_suffix(const PolygonEnvironment& env, const BoundaryConditions& bc,
                       const PlannerConfig& config = {});

// Both phases with shared state, for callers that want the surviving queue.
struct SearchState;
PlanResult refine_min_energy(const PolygonEnvironment& env, const BoundaryConditions& bc,
                             const PlanResult& min_distance_result, SearchState& state,
                             const PlannerConfig& config = {});

// Internal search state exposed so the energy refinement can reuse the
// distance phase's surviving queue and solution cache.
struct SearchState {
    PolygonEnvironment inflated;
    BoundaryConditions bc;  // radius zeroed after inflation
    std::map<std::vector<int>, Prefix> cache;
    std::vector<std::vector<int>> surviving;  // queue contents at termination
    PlanStats stats;
};

PlanResult plan_min_distance_core(const PolygonEnvironment& env, const BoundaryConditions& bc,
                                  const PlannerConfig& config, SearchState& state);

}  // namespace polyplan
