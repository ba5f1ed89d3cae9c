#include "polyplan/bvp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyplan/errors.hpp"

namespace polyplan {

namespace {

constexpr double kReconstructionTol = 1e-8;

// Chain rescaled to the unit horizon; velocities carry the factor T.
struct NormalizedChain {
    Vec2 p0, v0, pf, vf;
    const std::vector<JunctionSpec>* junctions;
};

NormalizedChain normalize(const BoundaryConditions& bc, const std::vector<JunctionSpec>& js) {
    const double T = bc.horizon();
    return {bc.p0, bc.v0 * T, bc.pf, bc.vf * T, &js};
}

void fill_pos(Eigen::MatrixXd& M, int row, int arc, double t, double sign = 1.0) {
    const int c = 4 * arc;
    M(row, c + 0) += sign * t * t * t;
    M(row, c + 1) += sign * t * t;
    M(row, c + 2) += sign * t;
    M(row, c + 3) += sign;
}

void fill_vel(Eigen::MatrixXd& M, int row, int arc, double t, double sign = 1.0) {
    const int c = 4 * arc;
    M(row, c + 0) += sign * 3.0 * t * t;
    M(row, c + 1) += sign * 2.0 * t;
    M(row, c + 2) += sign;
}

void fill_acc(Eigen::MatrixXd& M, int row, int arc, double t, double sign = 1.0) {
    const int c = 4 * arc;
    M(row, c + 0) += sign * 6.0 * t;
    M(row, c + 1) += sign * 2.0;
}

// Coefficients and residuals at fixed normalized junction times. The linear
// system decouples per axis into two solves sharing one 4(n+1) x 4(n+1)
// factorization; arcs are returned in the normalized frame.
struct CoreEval {
    std::vector<CubicArc> arcs;
    std::vector<double> residuals;
    double energy = 0.0;
    bool ok = false;
};

CoreEval evaluate_chain(const NormalizedChain& nc, const std::vector<double>& tau,
                        double guard_gap) {
    CoreEval out;
    const int n = static_cast<int>(tau.size());
    const auto& js = *nc.junctions;

    double prev = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double next = (i < n) ? tau[i] : 1.0;
        if (next - prev < guard_gap) return out;
        prev = (i < n) ? tau[i] : prev;
    }

    const int m = 4 * (n + 1);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd zx = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd zy = Eigen::VectorXd::Zero(m);

    fill_pos(M, 0, 0, 0.0);
    fill_vel(M, 1, 0, 0.0);
    fill_pos(M, 2, n, 1.0);
    fill_vel(M, 3, n, 1.0);
    zx(0) = nc.p0.x();
    zy(0) = nc.p0.y();
    zx(1) = nc.v0.x();
    zy(1) = nc.v0.y();
    zx(2) = nc.pf.x();
    zy(2) = nc.pf.y();
    zx(3) = nc.vf.x();
    zy(3) = nc.vf.y();

    for (int i = 0; i < n; ++i) {
        const int row = 4 + 4 * i;
        const double t = tau[static_cast<size_t>(i)];
        const Vec2& c = js[static_cast<size_t>(i)].position;
        fill_pos(M, row + 0, i, t);
        fill_pos(M, row + 1, i + 1, t);
        zx(row + 0) = zx(row + 1) = c.x();
        zy(row + 0) = zy(row + 1) = c.y();
        if (js[static_cast<size_t>(i)].stop) {
            fill_vel(M, row + 2, i, t);
            fill_vel(M, row + 3, i + 1, t);
        } else {
            fill_vel(M, row + 2, i, t);
            fill_vel(M, row + 2, i + 1, t, -1.0);
            fill_acc(M, row + 3, i, t);
            fill_acc(M, row + 3, i + 1, t, -1.0);
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const Eigen::VectorXd cx = lu.solve(zx);
    const Eigen::VectorXd cy = lu.solve(zy);
    if (!cx.allFinite() || !cy.allFinite()) return out;

    const double z_scale = std::max(zx.lpNorm<Eigen::Infinity>(), zy.lpNorm<Eigen::Infinity>());
    const double recon = std::max((M * cx - zx).lpNorm<Eigen::Infinity>(),
                                  (M * cy - zy).lpNorm<Eigen::Infinity>());
    if (recon > kReconstructionTol * std::max(z_scale, 1e-12)) return out;

    out.arcs.resize(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        CubicArc& arc = out.arcs[static_cast<size_t>(j)];
        const int c = 4 * j;
        arc.a3 = Vec2(cx(c + 0), cy(c + 0));
        arc.a2 = Vec2(cx(c + 1), cy(c + 1));
        arc.a1 = Vec2(cx(c + 2), cy(c + 2));
        arc.a0 = Vec2(cx(c + 3), cy(c + 3));
        arc.t_start = (j == 0) ? 0.0 : tau[static_cast<size_t>(j - 1)];
        arc.t_end = (j == n) ? 1.0 : tau[static_cast<size_t>(j)];
        out.energy += arc_energy(arc);
    }

    out.residuals.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = tau[static_cast<size_t>(i)];
        const CubicArc& before = out.arcs[static_cast<size_t>(i)];
        const CubicArc& after = out.arcs[static_cast<size_t>(i) + 1];
        if (js[static_cast<size_t>(i)].stop) {
            // Hamiltonian gap at a full stop; the arcs decouple there and the
            // control may jump, so stationarity in t_i reads |u-|^2 = |u+|^2.
            out.residuals[static_cast<size_t>(i)] =
                0.5 * (before.control(t).squaredNorm() - after.control(t).squaredNorm());
        } else {
            out.residuals[static_cast<size_t>(i)] =
                6.0 * (before.a3 - after.a3).dot(before.velocity(t));
        }
    }
    out.ok = true;
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Clamp times into the ordered set { eps <= t_1, t_i + eps <= t_{i+1}, t_n <= 1 - eps }.
void project_times(std::vector<double>& tau, double eps) {
    const int n = static_cast<int>(tau.size());
    double lo = eps;
    for (int i = 0; i < n; ++i) {
        tau[static_cast<size_t>(i)] = std::max(tau[static_cast<size_t>(i)], lo);
        lo = tau[static_cast<size_t>(i)] + eps;
    }
    double hi = 1.0 - eps;
    for (int i = n - 1; i >= 0; --i) {
        tau[static_cast<size_t>(i)] = std::min(tau[static_cast<size_t>(i)], hi);
        hi = tau[static_cast<size_t>(i)] - eps;
    }
}

std::vector<double> distance_proportional_times(const NormalizedChain& nc) {
    const auto& js = *nc.junctions;
    const size_t n = js.size();
    std::vector<double> tau(n, 0.0);
    std::vector<double> cum(n, 0.0);
    double total = 0.0;
    Vec2 prev = nc.p0;
    for (size_t i = 0; i < n; ++i) {
        total += (js[i].position - prev).norm();
        cum[i] = total;
        prev = js[i].position;
    }
    total += (nc.pf - prev).norm();
    for (size_t i = 0; i < n; ++i) {
        tau[i] = (total > 1e-12) ? cum[i] / total
                                 : static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return tau;
}

std::vector<double> uniform_times(size_t n) {
    std::vector<double> tau(n);
    for (size_t i = 0; i < n; ++i) {
        tau[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    }
    return tau;
}

struct NewtonOutcome {
    std::vector<double> tau;
    CoreEval eval;
    bool converged = false;
    int iterations = 0;
    int linear_solves = 0;
};

void write_trace(std::ostream* trace, int attempt, int iter, const std::vector<double>& tau,
                 double residual) {
    if (!trace) return;
    auto& os = *trace;
    os.precision(17);
    os << "{\"attempt\":" << attempt << ",\"iter\":" << iter << ",\"residual\":" << residual
       << ",\"times\":[";
    for (size_t i = 0; i < tau.size(); ++i) {
        os << (i ? "," : "") << tau[i];
    }
    os << "]}\n";
}

NewtonOutcome run_newton(const NormalizedChain& nc, std::vector<double> tau,
                         const SolverOptions& opts, int attempt_id) {
    NewtonOutcome best;
    const int n = static_cast<int>(tau.size());
    const double eps = opts.time_epsilon_rel;
    const double guard = std::min(1e-9, eps * 0.25);

    project_times(tau, eps);
    CoreEval cur = evaluate_chain(nc, tau, guard);
    best.linear_solves++;
    if (!cur.ok) return best;

    best.tau = tau;
    best.eval = cur;
    double best_rmax = max_abs(cur.residuals);
    write_trace(opts.trace, attempt_id, 0, tau, best_rmax);

    const auto tolerance = [&](const CoreEval& e) {
        return opts.residual_tol * std::max(1.0, e.energy);
    };
    if (n == 0) {
        best.converged = true;
        return best;
    }

    bool reached_tol = best_rmax <= tolerance(cur);
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        const double rmax = max_abs(cur.residuals);
        // Keep polishing a step or two past the tolerance; Newton is locally
        // quadratic so this lands near machine precision.
        if (reached_tol && rmax <= 1e-13 * std::max(1.0, cur.energy)) break;

        // Central-difference Jacobian, with probes kept inside the guard gap.
        Eigen::MatrixXd J(n, n);
        bool jac_ok = true;
        for (int j = 0; j < n && jac_ok; ++j) {
            const double lo_gap = tau[static_cast<size_t>(j)] -
                                  ((j == 0) ? 0.0 : tau[static_cast<size_t>(j - 1)]);
            const double hi_gap = ((j == n - 1) ? 1.0 : tau[static_cast<size_t>(j + 1)]) -
                                  tau[static_cast<size_t>(j)];
            const double h = std::max(1e-12, std::min({1e-6, 0.25 * lo_gap, 0.25 * hi_gap}));
            std::vector<double> tp = tau, tm = tau;
            tp[static_cast<size_t>(j)] += h;
            tm[static_cast<size_t>(j)] -= h;
            const CoreEval ep = evaluate_chain(nc, tp, guard);
            const CoreEval em = evaluate_chain(nc, tm, guard);
            best.linear_solves += 2;
            if (!ep.ok || !em.ok) {
                jac_ok = false;
                break;
            }
            for (int i = 0; i < n; ++i) {
                J(i, j) = (ep.residuals[static_cast<size_t>(i)] -
                           em.residuals[static_cast<size_t>(i)]) /
                          (2.0 * h);
            }
        }
        if (!jac_ok) break;

        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r(i) = cur.residuals[static_cast<size_t>(i)];
        const Eigen::VectorXd step = Eigen::PartialPivLU<Eigen::MatrixXd>(J).solve(-r);
        if (!step.allFinite()) break;

        // Damped step with halving until the residual improves.
        bool accepted = false;
        for (double lambda = 1.0; lambda >= 1.0 / 65536.0; lambda *= 0.5) {
            std::vector<double> trial = tau;
            for (int i = 0; i < n; ++i) trial[static_cast<size_t>(i)] += lambda * step(i);
            project_times(trial, eps);
            const CoreEval trial_eval = evaluate_chain(nc, trial, guard);
            best.linear_solves++;
            if (!trial_eval.ok) continue;
            const double trial_rmax = max_abs(trial_eval.residuals);
            if (trial_rmax < rmax * (1.0 - 1e-4 * lambda) || trial_rmax <= tolerance(trial_eval)) {
                tau = std::move(trial);
                cur = trial_eval;
                accepted = true;
                break;
            }
        }
        best.iterations = iter;
        if (!accepted) break;

        const double new_rmax = max_abs(cur.residuals);
        write_trace(opts.trace, attempt_id, iter, tau, new_rmax);
        if (new_rmax < best_rmax) {
            best_rmax = new_rmax;
            best.tau = tau;
            best.eval = cur;
        }
        if (new_rmax <= tolerance(cur)) reached_tol = true;
        if (reached_tol && new_rmax <= 1e-13 * std::max(1.0, cur.energy)) break;
    }

    best.converged = reached_tol && best_rmax <= tolerance(best.eval);
    return best;
}

CubicArc rebase_arc(const CubicArc& norm, double t0, double T) {
    // tau = alpha t + beta with alpha = 1/T, beta = -t0/T.
    const double al = 1.0 / T;
    const double be = -t0 / T;
    CubicArc arc;
    arc.a3 = norm.a3 * (al * al * al);
    arc.a2 = 3.0 * norm.a3 * (al * al * be) + norm.a2 * (al * al);
    arc.a1 = 3.0 * norm.a3 * (al * be * be) + 2.0 * norm.a2 * (al * be) + norm.a1 * al;
    arc.a0 = norm.a3 * (be * be * be) + norm.a2 * (be * be) + norm.a1 * be + norm.a0;
    arc.t_start = t0 + norm.t_start * T;
    arc.t_end = t0 + norm.t_end * T;
    return arc;
}

void check_problem(const BoundaryConditions& bc) {
    if (!(bc.horizon() > 0.0)) {
        throw std::invalid_argument("boundary conditions require tf > t0");
    }
}

std::vector<double> to_normalized_times(const BoundaryConditions& bc,
                                        const std::vector<double>& times) {
    const double T = bc.horizon();
    std::vector<double> tau(times.size());
    for (size_t i = 0; i < times.size(); ++i) tau[i] = (times[i] - bc.t0) / T;
    return tau;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_linear_system(
    const BoundaryConditions& bc, const std::vector<JunctionSpec>& junctions,
    const std::vector<double>& times) {
    check_problem(bc);
    if (times.size() != junctions.size()) {
        throw std::invalid_argument("one junction time per junction required");
    }
    double prev = bc.t0;
    for (double t : times) {
        if (!(t > prev)) throw std::invalid_argument("junction times must be strictly ordered");
        prev = t;
    }
    if (!times.empty() && !(times.back() < bc.tf)) {
        throw std::invalid_argument("junction times must precede tf");
    }

    const int n = static_cast<int>(junctions.size());
    const int m = 8 * (n + 1);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);

    // Column block for arc j: [a3x a3y a2x a2y a1x a1y a0x a0y].
    const auto pos_row = [&](int row, int arc, double t, int axis, double sign = 1.0) {
        const int c = 8 * arc + axis;
        A(row, c + 0) += sign * t * t * t;
        A(row, c + 2) += sign * t * t;
        A(row, c + 4) += sign * t;
        A(row, c + 6) += sign;
    };
    const auto vel_row = [&](int row, int arc, double t, int axis, double sign = 1.0) {
        const int c = 8 * arc + axis;
        A(row, c + 0) += sign * 3.0 * t * t;
        A(row, c + 2) += sign * 2.0 * t;
        A(row, c + 4) += sign;
    };
    const auto acc_row = [&](int row, int arc, double t, int axis, double sign = 1.0) {
        const int c = 8 * arc + axis;
        A(row, c + 0) += sign * 6.0 * t;
        A(row, c + 2) += sign * 2.0;
    };

    for (int axis = 0; axis < 2; ++axis) {
        pos_row(0 + axis, 0, bc.t0, axis);
        vel_row(2 + axis, 0, bc.t0, axis);
        pos_row(4 + axis, n, bc.tf, axis);
        vel_row(6 + axis, n, bc.tf, axis);
    }
    z(0) = bc.p0.x();
    z(1) = bc.p0.y();
    z(2) = bc.v0.x();
    z(3) = bc.v0.y();
    z(4) = bc.pf.x();
    z(5) = bc.pf.y();
    z(6) = bc.vf.x();
    z(7) = bc.vf.y();

    for (int i = 0; i < n; ++i) {
        const int row = 8 + 8 * i;
        const double t = times[static_cast<size_t>(i)];
        const JunctionSpec& js = junctions[static_cast<size_t>(i)];
        for (int axis = 0; axis < 2; ++axis) {
            pos_row(row + 0 + axis, i, t, axis);
            pos_row(row + 2 + axis, i + 1, t, axis);
            if (js.stop) {
                vel_row(row + 4 + axis, i, t, axis);
                vel_row(row + 6 + axis, i + 1, t, axis);
            } else {
                vel_row(row + 4 + axis, i, t, axis);
                vel_row(row + 4 + axis, i + 1, t, axis, -1.0);
                acc_row(row + 6 + axis, i, t, axis);
                acc_row(row + 6 + axis, i + 1, t, axis, -1.0);
            }
        }
        z(row + 0) = z(row + 2) = js.position.x();
        z(row + 1) = z(row + 3) = js.position.y();
    }
    return {std::move(A), std::move(z)};
}

std::vector<CubicArc> solve_coefficients(const BoundaryConditions& bc,
                                         const std::vector<JunctionSpec>& junctions,
                                         const std::vector<double>& times,
                                         const SolverOptions& opts) {
    check_problem(bc);
    const double T = bc.horizon();
    const double eps_t = opts.time_epsilon_rel * T;

    double prev = bc.t0;
    std::vector<double> all = times;
    all.push_back(bc.tf);
    for (double t : all) {
        const double gap = t - prev;
        if (gap < eps_t) {
            throw ConditioningError("junction time gap " + std::to_string(gap) +
                                        " s is below the separation threshold " +
                                        std::to_string(eps_t) + " s",
                                    gap);
        }
        prev = t;
    }

    const NormalizedChain nc = normalize(bc, junctions);
    const CoreEval eval =
        evaluate_chain(nc, to_normalized_times(bc, times), opts.time_epsilon_rel * 0.25);
    if (!eval.ok) {
        throw ConditioningError("junction linear system is ill-conditioned for these times",
                                eps_t);
    }
    std::vector<CubicArc> arcs;
    arcs.reserve(eval.arcs.size());
    for (const CubicArc& a : eval.arcs) arcs.push_back(rebase_arc(a, bc.t0, T));
    return arcs;
}

std::vector<double> junction_residuals(const BoundaryConditions& bc,
                                       const std::vector<JunctionSpec>& junctions,
                                       const std::vector<double>& times,
                                       const SolverOptions& opts) {
    check_problem(bc);
    const NormalizedChain nc = normalize(bc, junctions);
    const CoreEval eval =
        evaluate_chain(nc, to_normalized_times(bc, times), opts.time_epsilon_rel * 0.25);
    if (!eval.ok) {
        throw ConditioningError("junction linear system is ill-conditioned for these times",
                                opts.time_epsilon_rel * bc.horizon());
    }
    return eval.residuals;
}

ChainSolution solve_chain(const BoundaryConditions& bc, const std::vector<JunctionSpec>& junctions,
                          const SolverOptions& opts) {
    check_problem(bc);
    const double T = bc.horizon();
    const NormalizedChain nc = normalize(bc, junctions);
    const size_t n = junctions.size();

    std::vector<std::vector<double>> inits;
    if (opts.warm_start.size() == n && n > 0) {
        inits.push_back(to_normalized_times(bc, opts.warm_start));
    }
    inits.push_back(distance_proportional_times(nc));
    if (opts.multi_start && n > 0) inits.push_back(uniform_times(n));

    // Drop duplicate initializations.
    std::vector<std::vector<double>> unique_inits;
    for (const auto& cand : inits) {
        bool dup = false;
        for (const auto& kept : unique_inits) {
            double diff = 0.0;
            for (size_t i = 0; i < n; ++i) diff = std::max(diff, std::fabs(cand[i] - kept[i]));
            if (diff < 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) unique_inits.push_back(cand);
    }

    ChainSolution result;
    NewtonOutcome best;
    bool have_best = false;
    int attempt_id = 0;
    int total_solves = 0;
    int total_iters = 0;
    for (const auto& init : unique_inits) {
        NewtonOutcome outcome = run_newton(nc, init, opts, attempt_id++);
        total_solves += outcome.linear_solves;
        total_iters += outcome.iterations;
        if (!outcome.eval.ok) continue;
        const bool better =
            !have_best ||
            (outcome.converged && (!best.converged || outcome.eval.energy < best.eval.energy)) ||
            (!best.converged && !outcome.converged &&
             max_abs(outcome.eval.residuals) < max_abs(best.eval.residuals));
        if (better) {
            best = std::move(outcome);
            have_best = true;
        }
    }
    result.linear_solves = total_solves;
    result.iterations = total_iters;
    if (!have_best) return result;  // flagged: not converged, no arcs

    result.converged = best.converged;
    result.max_residual = max_abs(best.eval.residuals);
    result.junction_times.resize(n);
    for (size_t i = 0; i < n; ++i) result.junction_times[i] = bc.t0 + best.tau[i] * T;
    result.arcs.reserve(best.eval.arcs.size());
    for (const CubicArc& a : best.eval.arcs) result.arcs.push_back(rebase_arc(a, bc.t0, T));
    double cost = 0.0;
    for (const CubicArc& a : result.arcs) cost += arc_energy(a);
    result.cost = cost;
    return result;
}

std::vector<JunctionSpec> junctions_from_sequence(const PolygonEnvironment& env,
                                                  const std::vector<int>& sequence) {
    std::vector<JunctionSpec> js;
    js.reserve(sequence.size());
    int prev = -1;
    for (int idx : sequence) {
        if (idx < 0 || idx >= env.vertex_count()) {
            throw std::invalid_argument("sequence vertex " + std::to_string(idx) +
                                        " out of range");
        }
        if (idx == prev) {
            throw std::invalid_argument("sequence repeats vertex " + std::to_string(idx));
        }
        js.push_back({env.vertex(idx), env.vertex_convexity(idx) == VertexKind::Reflex});
        prev = idx;
    }
    return js;
}

ChainSolution solve_chain(const ChainProblem& problem, const SolverOptions& opts) {
    if (problem.env == nullptr) throw std::invalid_argument("chain problem needs an environment");
    return solve_chain(problem.bc, junctions_from_sequence(*problem.env, problem.sequence), opts);
}

Trajectory chain_trajectory(const ChainSolution& solution, const std::vector<int>& sequence) {
    Trajectory traj;
    traj.arcs = solution.arcs;
    traj.junctions.reserve(solution.junction_times.size());
    for (size_t i = 0; i < solution.junction_times.size(); ++i) {
        Junction j;
        j.vertex = (i < sequence.size()) ? sequence[i] : -1;
        j.time = solution.junction_times[i];
        traj.junctions.push_back(j);
    }
    return traj;
}

}  // namespace polyplan
