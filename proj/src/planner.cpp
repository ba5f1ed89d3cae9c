#include "polyplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "polyplan/errors.hpp"

namespace polyplan {

namespace {

// Heap ordering: (key, length, lexicographic vertex indices), smallest first.
struct QueueEntry {
    double key;
    std::vector<int> sequence;

    bool operator>(const QueueEntry& other) const {
        if (key != other.key) return key > other.key;
        if (sequence.size() != other.sequence.size()) return sequence.size() > other.sequence.size();
        return sequence > other.sequence;
    }
};

using MinHeap = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>>;

double chain_distance(const PolygonEnvironment& env, const BoundaryConditions& bc,
                      const std::vector<int>& sequence) {
    double total = 0.0;
    Vec2 prev = bc.p0;
    for (int idx : sequence) {
        total += (env.vertex(idx) - prev).norm();
        prev = env.vertex(idx);
    }
    return total + (bc.pf - prev).norm();
}

// Solves (or fetches) the full chain for the sequence, warm-starting from the
// parent's converged junction times when available.
Prefix& ensure_solved(SearchState& state, const PlannerConfig& config,
                      const std::vector<int>& sequence) {
    Prefix& pf = state.cache[sequence];
    if (pf.sequence.empty() && !sequence.empty()) pf.sequence = sequence;
    if (pf.solved) return pf;
    pf.distance = chain_distance(state.inflated, state.bc, sequence);

    SolverOptions opts = config.solver;
    if (!sequence.empty()) {
        const std::vector<int> parent_seq(sequence.begin(), sequence.end() - 1);
        auto it = state.cache.find(parent_seq);
        if (it != state.cache.end() && it->second.solved && it->second.solution.converged &&
            !it->second.solution.junction_times.empty()) {
            // Parent times, plus the new junction placed distance-proportionally
            // between the last parent junction and tf.
            std::vector<double> warm = it->second.solution.junction_times;
            const Vec2 last_vertex = state.inflated.vertex(sequence.back());
            const Vec2 prev_vertex = state.inflated.vertex(parent_seq.back());
            const double d1 = (last_vertex - prev_vertex).norm();
            const double d2 = (state.bc.pf - last_vertex).norm();
            const double t_prev = warm.back();
            const double frac = (d1 + d2 > 1e-12) ? d1 / (d1 + d2) : 0.5;
            warm.push_back(t_prev + frac * (state.bc.tf - t_prev));
            opts.warm_start = std::move(warm);
        }
    }

    ChainProblem problem{state.bc, sequence, &state.inflated};
    pf.solution = solve_chain(problem, opts);
    pf.solved = true;
    pf.energy_bound = pf.solution.cost;
    state.stats.solver_calls++;
    pf.window_feasible =
        prefix_feasible(pf.solution, sequence, state.inflated,
                        static_cast<int>(sequence.size()))
            .feasible;
    return pf;
}

PlanResult make_failure(PlanFailure failure, PlanMode mode, const PlanStats& stats) {
    PlanResult r;
    r.success = false;
    r.failure = failure;
    r.mode = mode;
    r.stats = stats;
    return r;
}

void prepare_state(const PolygonEnvironment& env, const BoundaryConditions& bc,
                   SearchState& state) {
    if (!(bc.horizon() > 0.0)) throw std::invalid_argument("planning requires tf > t0");
    state.inflated = inflate_environment(env, bc.radius);
    state.bc = bc;
    state.bc.radius = 0.0;  // folded into the environment
    if (!state.inflated.point_free(bc.p0)) {
        throw std::invalid_argument("start position is not free of the inflated obstacles");
    }
    if (!state.inflated.point_free(bc.pf)) {
        throw std::invalid_argument("goal position is not free of the inflated obstacles");
    }
}

}  // namespace

PlanResult plan_min_distance_core(const PolygonEnvironment& env, const BoundaryConditions& bc,
                                  const PlannerConfig& config, SearchState& state) {
    prepare_state(env, bc, state);

    MinHeap queue;
    const auto push = [&](const std::vector<int>& seq, double key) {
        queue.push({key, seq});
        state.stats.enqueued++;
        state.stats.queue_peak =
            std::max<std::int64_t>(state.stats.queue_peak, static_cast<std::int64_t>(queue.size()));
    };

    // Seeds: the empty prefix (the unconstrained arc) plus every single vertex.
    push({}, chain_distance(state.inflated, state.bc, {}));
    for (int k = 0; k < state.inflated.vertex_count(); ++k) {
        std::vector<int> seq{k};
        push(seq, chain_distance(state.inflated, state.bc, seq));
    }

    double best_distance = std::numeric_limits<double>::infinity();
    std::vector<int> best_sequence;
    bool have_best = false;

    while (!queue.empty() && queue.top().key < best_distance) {
        const QueueEntry entry = queue.top();
        queue.pop();
        state.stats.prefixes_popped++;
        if (config.pop_key_trace) config.pop_key_trace->push_back(entry.key);

        Prefix& pf = ensure_solved(state, config, entry.sequence);
        if (trajectory_feasible(pf.solution, entry.sequence, state.inflated).feasible &&
            entry.key < best_distance) {
            best_distance = entry.key;
            best_sequence = entry.sequence;
            have_best = true;
        }

        state.stats.prefixes_expanded++;
        for (int k = 0; k < state.inflated.vertex_count(); ++k) {
            if (std::find(entry.sequence.begin(), entry.sequence.end(), k) !=
                entry.sequence.end()) {
                continue;  // no vertex appears twice
            }
            std::vector<int> child = entry.sequence;
            child.push_back(k);
            const Prefix& child_pf = ensure_solved(state, config, child);
            if (child_pf.window_feasible) {
                if (queue.size() >= config.queue_cap) {
                    return make_failure(PlanFailure::QueueOverflow, PlanMode::MinDistance,
                                        state.stats);
                }
                push(child, child_pf.distance);
            }
        }
    }

    // Queue contents at termination feed the energy refinement.
    state.surviving.clear();
    while (!queue.empty()) {
        state.surviving.push_back(queue.top().sequence);
        queue.pop();
    }

    if (!have_best) {
        return make_failure(PlanFailure::NoFeasibleSequence, PlanMode::MinDistance, state.stats);
    }

    PlanResult result;
    result.success = true;
    result.mode = PlanMode::MinDistance;
    result.sequence = best_sequence;
    const Prefix& winner = state.cache.at(best_sequence);
    result.trajectory = chain_trajectory(winner.solution, best_sequence);
    result.cost = winner.solution.cost;
    result.distance = best_distance;
    result.stats = state.stats;
    return result;
}

PlanResult plan_min_distance(const PolygonEnvironment& env, const BoundaryConditions& bc,
                             const PlannerConfig& config) {
    SearchState state;
    return plan_min_distance_core(env, bc, config, state);
}

PlanResult refine_min_energy(const PolygonEnvironment& env, const BoundaryConditions& bc,
                             const PlanResult& min_distance_result, SearchState& state,
                             const PlannerConfig& config) {
    (void)env;
    (void)bc;
    if (!min_distance_result.success) {
        PlanResult r = min_distance_result;
        r.mode = PlanMode::MinEnergy;
        return r;
    }

    double best_cost = min_distance_result.cost;
    std::vector<int> best_sequence = min_distance_result.sequence;

    MinHeap queue;
    const auto push = [&](const std::vector<int>& seq, double key) {
        queue.push({key, seq});
        state.stats.enqueued++;
        state.stats.queue_peak =
            std::max<std::int64_t>(state.stats.queue_peak, static_cast<std::int64_t>(queue.size()));
    };

    // Re-key the surviving prefixes by their energy lower bound; anything
    // already above the incumbent can never win.
    for (const auto& seq : state.surviving) {
        const Prefix& pf = ensure_solved(state, config, seq);
        if (!pf.solution.converged) continue;
        if (pf.energy_bound <= best_cost) push(seq, pf.energy_bound);
    }

    while (!queue.empty() && queue.top().key < best_cost) {
        const QueueEntry entry = queue.top();
        queue.pop();
        state.stats.prefixes_popped++;
        if (config.pop_key_trace) config.pop_key_trace->push_back(entry.key);

        Prefix& pf = ensure_solved(state, config, entry.sequence);
        if (trajectory_feasible(pf.solution, entry.sequence, state.inflated).feasible &&
            pf.solution.cost < best_cost) {
            best_cost = pf.solution.cost;
            best_sequence = entry.sequence;
        }

        state.stats.prefixes_expanded++;
        for (int k = 0; k < state.inflated.vertex_count(); ++k) {
            if (std::find(entry.sequence.begin(), entry.sequence.end(), k) !=
                entry.sequence.end()) {
                continue;
            }
            std::vector<int> child = entry.sequence;
            child.push_back(k);
            const Prefix& child_pf = ensure_solved(state, config, child);
            if (child_pf.window_feasible && child_pf.solution.converged &&
                child_pf.energy_bound <= best_cost) {
                if (queue.size() >= config.queue_cap) {
                    return make_failure(PlanFailure::QueueOverflow, PlanMode::MinEnergy,
                                        state.stats);
                }
                push(child, child_pf.energy_bound);
            }
        }
    }

    PlanResult result;
    result.success = true;
    result.mode = PlanMode::MinEnergy;
    result.sequence = best_sequence;
    const Prefix& winner = state.cache.at(best_sequence);
    result.trajectory = chain_trajectory(winner.solution, best_sequence);
    result.cost = winner.solution.cost;
    result.distance = winner.distance;
    result.stats = state.stats;
    return result;
}

PlanResult plan_min_energy(const PolygonEnvironment& env, const BoundaryConditions& bc,
                           const PlannerConfig& config) {
    SearchState state;
    const PlanResult distance_result = plan_min_distance_core(env, bc, config, state);
    if (!distance_result.success) {
        PlanResult r = distance_result;
        r.mode = PlanMode::MinEnergy;
        return r;
    }
    return refine_min_energy(env, bc, distance_result, state, config);
}

PlanResult plan_suffix(const PolygonEnvironment& env, const BoundaryConditions& bc,
                       const PlannerConfig& config) {
    BoundaryConditions reversed = bc;
    reversed.p0 = bc.pf;
    reversed.v0 = -bc.vf;
    reversed.pf = bc.p0;
    reversed.vf = -bc.v0;

    PlanResult backward = plan_min_distance(env, reversed, config);
    if (!backward.success) return backward;

    std::vector<int> forward_sequence(backward.sequence.rbegin(), backward.sequence.rend());

    // Re-solve the forward chain so the reported trajectory runs in forward time.
    SearchState state;
    prepare_state(env, bc, state);
    const Prefix& pf = ensure_solved(state, config, forward_sequence);
    PlanResult result;
    result.mode = PlanMode::MinDistance;
    result.sequence = forward_sequence;
    result.stats = backward.stats;
    result.stats.solver_calls += state.stats.solver_calls;
    result.distance = pf.distance;
    result.success =
        trajectory_feasible(pf.solution, forward_sequence, state.inflated).feasible;
    if (!result.success) {
        result.failure = PlanFailure::NoFeasibleSequence;
        return result;
    }
    result.trajectory = chain_trajectory(pf.solution, forward_sequence);
    result.cost = pf.solution.cost;
    return result;
}

}  // namespace polyplan
