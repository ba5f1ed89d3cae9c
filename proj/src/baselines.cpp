#include "polyplan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "polyplan/rng.hpp"

namespace polyplan {

namespace {

double path_length(const std::vector<Vec2>& pts) {
    double total = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) total += (pts[i] - pts[i - 1]).norm();
    return total;
}

// Greedy shortcutting: repeatedly jump to the farthest visible waypoint.
std::vector<Vec2> shortcut(const PolygonEnvironment& env, std::vector<Vec2> pts) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Vec2> out;
        out.push_back(pts.front());
        size_t i = 0;
        while (i + 1 < pts.size()) {
            size_t best = i + 1;
            for (size_t j = pts.size() - 1; j > i + 1; --j) {
                if (segment_free(env, pts[i], pts[j])) {
                    best = j;
                    break;
                }
            }
            if (best > i + 1) changed = true;
            out.push_back(pts[best]);
            i = best;
        }
        pts = std::move(out);
    }
    return pts;
}

WaypointPath finish_path(const PolygonEnvironment& env, std::vector<Vec2> pts) {
    pts = shortcut(env, std::move(pts));
    WaypointPath path;
    path.length = path_length(pts);
    path.waypoints = std::move(pts);
    return path;
}

}  // namespace

std::optional<WaypointPath> rrt_star(const PolygonEnvironment& env, const Vec2& p0, const Vec2& pf,
                                     const SampleDomain& domain, const RrtStarConfig& config) {
    if (!env.point_free(p0) || !env.point_free(pf)) return std::nullopt;
    Rng rng(splitmix64(config.seed));

    struct Node {
        Vec2 p;
        int parent;
        double cost;
    };
    std::vector<Node> nodes;
    nodes.push_back({p0, -1, 0.0});
    const double gamma = config.rewire_gamma_scale * domain.diagonal();

    for (int it = 0; it < config.node_budget; ++it) {
        const bool to_goal = rng.uniform() < config.goal_bias;
        const Vec2 sample = to_goal ? pf
                                    : Vec2(rng.uniform(domain.lo.x(), domain.hi.x()),
                                           rng.uniform(domain.lo.y(), domain.hi.y()));

        int nearest = 0;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double d2 = (nodes[i].p - sample).squaredNorm();
            if (d2 < nearest_d2) {
                nearest_d2 = d2;
                nearest = static_cast<int>(i);
            }
        }

        Vec2 target = sample;
        const double dist = std::sqrt(nearest_d2);
        if (dist > config.steer_radius) {
            target = nodes[static_cast<size_t>(nearest)].p +
                     (sample - nodes[static_cast<size_t>(nearest)].p) * (config.steer_radius / dist);
        }
        if (!env.point_free(target)) continue;
        if (!segment_free(env, nodes[static_cast<size_t>(nearest)].p, target)) continue;

        // Choose the cheapest collision-free parent in the rewiring ball.
        const double n_count = static_cast<double>(nodes.size() + 1);
        const double radius =
            std::max(config.steer_radius, gamma * std::sqrt(std::log(n_count) / n_count));
        int parent = nearest;
        double cost = nodes[static_cast<size_t>(nearest)].cost +
                      (nodes[static_cast<size_t>(nearest)].p - target).norm();
        std::vector<int> neighbors;
        for (size_t i = 0; i < nodes.size(); ++i) {
            const double d = (nodes[i].p - target).norm();
            if (d <= radius) neighbors.push_back(static_cast<int>(i));
        }
        for (int i : neighbors) {
            const double c = nodes[static_cast<size_t>(i)].cost +
                             (nodes[static_cast<size_t>(i)].p - target).norm();
            if (c < cost && segment_free(env, nodes[static_cast<size_t>(i)].p, target)) {
                cost = c;
                parent = i;
            }
        }
        const int added = static_cast<int>(nodes.size());
        nodes.push_back({target, parent, cost});

        // Rewire the neighborhood through the new node when cheaper.
        for (int i : neighbors) {
            Node& nb = nodes[static_cast<size_t>(i)];
            const double c = cost + (nb.p - target).norm();
            if (c < nb.cost && segment_free(env, target, nb.p)) {
                nb.parent = added;
                nb.cost = c;
            }
        }
    }

    // Best connection to the goal.
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const double d = (nodes[i].p - pf).norm();
        const double c = nodes[i].cost + d;
        if (c < best_cost && segment_free(env, nodes[i].p, pf)) {
            best_cost = c;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return std::nullopt;

    std::vector<Vec2> pts{pf};
    for (int i = best; i >= 0; i = nodes[static_cast<size_t>(i)].parent) {
        pts.push_back(nodes[static_cast<size_t>(i)].p);
    }
    std::reverse(pts.begin(), pts.end());
    return finish_path(env, std::move(pts));
}

std::optional<WaypointPath> prm(const PolygonEnvironment& env, const Vec2& p0, const Vec2& pf,
                                const SampleDomain& domain, const PrmConfig& config) {
    if (!env.point_free(p0) || !env.point_free(pf)) return std::nullopt;
    Rng rng(splitmix64(config.seed));

    std::vector<Vec2> nodes{p0, pf};
    int tries = 0;
    while (static_cast<int>(nodes.size()) < config.node_budget + 2 &&
           tries < config.node_budget * 16) {
        ++tries;
        const Vec2 p(rng.uniform(domain.lo.x(), domain.hi.x()),
                     rng.uniform(domain.lo.y(), domain.hi.y()));
        if (env.point_free(p)) nodes.push_back(p);
    }

    const size_t n = nodes.size();
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    std::vector<std::pair<double, int>> order;
    order.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        order.clear();
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            order.emplace_back((nodes[j] - nodes[i]).norm(), static_cast<int>(j));
        }
        const size_t k = std::min<size_t>(static_cast<size_t>(config.k_neighbors), order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end());
        for (size_t t = 0; t < k; ++t) {
            const auto [d, j] = order[t];
            if (segment_free(env, nodes[i], nodes[static_cast<size_t>(j)])) {
                adj[i].emplace_back(j, d);
            }
        }
    }
    // The k-NN relation is asymmetric; the roadmap is not.
    for (size_t i = 0; i < n; ++i) {
        for (const auto& [j, w] : adj[i]) {
            bool present = false;
            for (const auto& [back, bw] : adj[static_cast<size_t>(j)]) {
                if (back == static_cast<int>(i)) {
                    present = true;
                    break;
                }
            }
            if (!present) adj[static_cast<size_t>(j)].emplace_back(static_cast<int>(i), w);
        }
    }

    // Dijkstra from p0 (node 0) to pf (node 1).
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[0] = 0.0;
    pq.push({0.0, 0});
    while (!pq.empty()) {
        const auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(i)]) continue;
        if (i == 1) break;
        for (const auto& [j, w] : adj[static_cast<size_t>(i)]) {
            if (d + w < dist[static_cast<size_t>(j)]) {
                dist[static_cast<size_t>(j)] = d + w;
                prev[static_cast<size_t>(j)] = i;
                pq.push({d + w, j});
            }
        }
    }
    if (!std::isfinite(dist[1])) return std::nullopt;

    std::vector<Vec2> pts;
    for (int i = 1; i >= 0 && i < static_cast<int>(n); i = prev[static_cast<size_t>(i)]) {
        pts.push_back(nodes[static_cast<size_t>(i)]);
        if (prev[static_cast<size_t>(i)] < 0) break;
    }
    std::reverse(pts.begin(), pts.end());
    if (pts.empty() || (pts.front() - p0).norm() > 0.0) return std::nullopt;
    return finish_path(env, std::move(pts));
}

ChainSolution energy_lower_bound(const WaypointPath& path, const BoundaryConditions& bc,
                                 const SolverOptions& opts) {
    std::vector<JunctionSpec> junctions;
    for (size_t i = 1; i + 1 < path.waypoints.size(); ++i) {
        junctions.push_back({path.waypoints[i], false});
    }
    return solve_chain(bc, junctions, opts);
}

}  // namespace polyplan
