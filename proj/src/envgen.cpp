#include "polyplan/envgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyplan/errors.hpp"
#include "polyplan/rng.hpp"

namespace polyplan {

namespace {

// k-means with farthest-point initialization and a fixed iteration budget.
// All ties break toward the lowest index, so the partition is a pure function
// of the inputs.
std::vector<int> kmeans_partition(const std::vector<Vec2>& points, int k) {
    const int n = static_cast<int>(points.size());
    k = std::min(k, n);
    std::vector<Vec2> centers;
    centers.reserve(static_cast<size_t>(k));
    centers.push_back(points[0]);
    std::vector<double> min_d2(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    while (static_cast<int>(centers.size()) < k) {
        int farthest = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            min_d2[static_cast<size_t>(i)] = std::min(
                min_d2[static_cast<size_t>(i)], (points[static_cast<size_t>(i)] - centers.back()).squaredNorm());
            if (min_d2[static_cast<size_t>(i)] > best) {
                best = min_d2[static_cast<size_t>(i)];
                farthest = i;
            }
        }
        centers.push_back(points[static_cast<size_t>(farthest)]);
    }

    std::vector<int> assign(static_cast<size_t>(n), 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d2 =
                    (points[static_cast<size_t>(i)] - centers[static_cast<size_t>(c)]).squaredNorm();
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best_c = c;
                }
            }
            if (assign[static_cast<size_t>(i)] != best_c) {
                assign[static_cast<size_t>(i)] = best_c;
                changed = true;
            }
        }
        std::vector<Vec2> sums(static_cast<size_t>(k), Vec2(0.0, 0.0));
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            sums[static_cast<size_t>(assign[static_cast<size_t>(i)])] += points[static_cast<size_t>(i)];
            counts[static_cast<size_t>(assign[static_cast<size_t>(i)])]++;
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) {
                centers[static_cast<size_t>(c)] = sums[static_cast<size_t>(c)] / counts[static_cast<size_t>(c)];
            }
        }
        if (!changed) break;
    }
    return assign;
}

}  // namespace

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const Vec2& a, const Vec2& b) { return a == b; }),
                 points.end());
    const size_t n = points.size();
    if (n < 3) return {};

    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross2(hull[k - 1] - hull[k - 2], points[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) return {};
    return hull;
}

PolygonEnvironment generate_environment(const EnvGenConfig& config, const Vec2& p0,
                                        const Vec2& pf) {
    if (config.point_count <= 0 || config.cluster_count <= 0 ||
        config.cluster_count > config.point_count || config.domain_width <= 0.0 ||
        config.domain_height <= 0.0 || config.endpoint_clearance <= 0.0) {
        throw ValidationError("invalid environment-generation configuration");
    }
    Rng rng(splitmix64(config.seed));

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        std::vector<Vec2> points;
        points.reserve(static_cast<size_t>(config.point_count));
        for (int i = 0; i < config.point_count; ++i) {
            const Vec2 p(rng.uniform(0.0, config.domain_width),
                         rng.uniform(0.0, config.domain_height));
            if ((p - p0).norm() < config.endpoint_clearance ||
                (p - pf).norm() < config.endpoint_clearance) {
                continue;
            }
            points.push_back(p);
        }
        if (points.size() < 3) {
            last_error = "too few points remain after removing the endpoint disks";
            continue;
        }

        const std::vector<int> assign =
            kmeans_partition(points, std::min<int>(config.cluster_count,
                                                   static_cast<int>(points.size())));

        std::vector<Vec2> vertices;
        std::vector<std::vector<int>> rings;
        const int k = 1 + *std::max_element(assign.begin(), assign.end());
        for (int c = 0; c < k; ++c) {
            std::vector<Vec2> cluster;
            for (size_t i = 0; i < points.size(); ++i) {
                if (assign[i] == c) cluster.push_back(points[i]);
            }
            if (cluster.size() <= 2) continue;  // discarded cluster
            const std::vector<Vec2> hull = convex_hull(std::move(cluster));
            if (hull.size() < 3) continue;  // collinear cluster
            std::vector<int> ring;
            ring.reserve(hull.size());
            for (const Vec2& v : hull) {
                ring.push_back(static_cast<int>(vertices.size()));
                vertices.push_back(v);
            }
            rings.push_back(std::move(ring));
        }
        if (rings.empty()) {
            last_error = "every cluster was discarded";
            continue;
        }

        try {
            PolygonEnvironment env(std::move(vertices), std::move(rings),
                                   config.obstacle_clearance);
            if (!env.point_free(p0) || env.min_distance(p0) <= 1e-9) {
                last_error = "start position not free";
                continue;
            }
            if (!env.point_free(pf) || env.min_distance(pf) <= 1e-9) {
                last_error = "goal position not free";
                continue;
            }
            return env;
        } catch (const ValidationError& e) {
            last_error = e.what();
            continue;
        }
    }
    throw ValidationError("environment generation failed after " +
                          std::to_string(config.max_attempts) +
                          " attempts (seed " + std::to_string(config.seed) +
                          "): " + last_error);
}

}  // namespace polyplan
