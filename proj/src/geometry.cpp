#include "polyplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polyplan/errors.hpp"

namespace polyplan {

namespace {

std::string vec_str(const Vec2& v) {
    return "(" + std::to_string(v.x()) + ", " + std::to_string(v.y()) + ")";
}

double ring_signed_area(const std::vector<Vec2>& vertices, const std::vector<int>& ring) {
    double acc = 0.0;
    const size_t m = ring.size();
    for (size_t j = 0; j < m; ++j) {
        const Vec2& a = vertices[static_cast<size_t>(ring[j])];
        const Vec2& b = vertices[static_cast<size_t>(ring[(j + 1) % m])];
        acc += cross2(a, b);
    }
    return 0.5 * acc;
}

}  // namespace

PolygonEnvironment::PolygonEnvironment(std::vector<Vec2> vertices,
                                       std::vector<std::vector<int>> polygons,
                                       double clearance)
    : vertices_(std::move(vertices)), polygons_(std::move(polygons)), clearance_(clearance) {
    build_and_validate();
}

void PolygonEnvironment::build_and_validate() {
    const int nv = vertex_count();
    vertex_polygon_.assign(static_cast<size_t>(nv), -1);
    face_starting_at_.assign(static_cast<size_t>(nv), -1);
    face_ending_at_.assign(static_cast<size_t>(nv), -1);
    vertex_kind_.assign(static_cast<size_t>(nv), VertexKind::Convex);
    faces_.clear();

    for (const Vec2& v : vertices_) {
        if (!std::isfinite(v.x()) || !std::isfinite(v.y())) {
            throw ValidationError("non-finite vertex coordinate");
        }
    }

    for (size_t l = 0; l < polygons_.size(); ++l) {
        const auto& ring = polygons_[l];
        if (ring.size() < 3) {
            throw ValidationError("polygon " + std::to_string(l) + " has fewer than 3 vertices");
        }
        for (int idx : ring) {
            if (idx < 0 || idx >= nv) {
                throw ValidationError("polygon " + std::to_string(l) + " references vertex " +
                                      std::to_string(idx) + " out of range");
            }
            if (vertex_polygon_[static_cast<size_t>(idx)] != -1) {
                throw ValidationError("vertex " + std::to_string(idx) +
                                      " appears in more than one ring (or twice in polygon " +
                                      std::to_string(l) + ")");
            }
            vertex_polygon_[static_cast<size_t>(idx)] = static_cast<int>(l);
        }
    }
    for (int i = 0; i < nv; ++i) {
        if (vertex_polygon_[static_cast<size_t>(i)] == -1) {
            throw ValidationError("vertex " + std::to_string(i) + " is not part of any polygon");
        }
    }

    // Faces, one per vertex, in ring order.
    for (size_t l = 0; l < polygons_.size(); ++l) {
        const auto& ring = polygons_[l];
        const size_t m = ring.size();
        for (size_t j = 0; j < m; ++j) {
            const int i0 = ring[j];
            const int i1 = ring[(j + 1) % m];
            Face f;
            f.v_first = i0;
            f.v_second = i1;
            const Vec2 d = vertex(i1) - vertex(i0);
            f.length = d.norm();
            if (f.length <= 1e-12) {
                throw ValidationError("zero-length edge between vertices " + std::to_string(i0) +
                                      " and " + std::to_string(i1));
            }
            f.tangent = d / f.length;
            f.normal = rotate_cw(f.tangent);
            const int k = static_cast<int>(faces_.size());
            faces_.push_back(f);
            face_starting_at_[static_cast<size_t>(i0)] = k;
            face_ending_at_[static_cast<size_t>(i1)] = k;
        }
    }

    // Orientation.
    for (size_t l = 0; l < polygons_.size(); ++l) {
        if (ring_signed_area(vertices_, polygons_[l]) <= 0.0) {
            throw ValidationError("polygon " + std::to_string(l) +
                                  " is not counter-clockwise");
        }
    }

    // Simplicity: non-adjacent edges of the same ring must not intersect.
    for (size_t l = 0; l < polygons_.size(); ++l) {
        const auto& ring = polygons_[l];
        const size_t m = ring.size();
        for (size_t a = 0; a < m; ++a) {
            for (size_t b = a + 1; b < m; ++b) {
                if (b == a + 1 || (a == 0 && b == m - 1)) continue;  // adjacent
                const Vec2& a0 = vertices_[static_cast<size_t>(ring[a])];
                const Vec2& a1 = vertices_[static_cast<size_t>(ring[(a + 1) % m])];
                const Vec2& b0 = vertices_[static_cast<size_t>(ring[b])];
                const Vec2& b1 = vertices_[static_cast<size_t>(ring[(b + 1) % m])];
                if (segments_intersect(a0, a1, b0, b1)) {
                    throw ValidationError("polygon " + std::to_string(l) +
                                          " is self-intersecting (edges " + std::to_string(a) +
                                          " and " + std::to_string(b) + ")");
                }
            }
        }
    }

    // Convexity per vertex; collinear triples are rejected.
    for (size_t l = 0; l < polygons_.size(); ++l) {
        const auto& ring = polygons_[l];
        const size_t m = ring.size();
        for (size_t j = 0; j < m; ++j) {
            const int ip = ring[(j + m - 1) % m];
            const int ic = ring[j];
            const int in = ring[(j + 1) % m];
            const Vec2 e0 = vertex(ic) - vertex(ip);
            const Vec2 e1 = vertex(in) - vertex(ic);
            const double c = cross2(e0, e1);
            if (std::fabs(c) <= 1e-12 * e0.norm() * e1.norm()) {
                throw ValidationError("collinear vertices around vertex " + std::to_string(ic) +
                                      " in polygon " + std::to_string(l));
            }
            vertex_kind_[static_cast<size_t>(ic)] =
                (c > 0.0) ? VertexKind::Convex : VertexKind::Reflex;
        }
    }

    // Outward-normal sanity: the face midpoint nudged along the normal must
    // leave the polygon.
    for (int k = 0; k < face_count(); ++k) {
        const Face& f = face(k);
        const Vec2 mid = 0.5 * (vertex(f.v_first) + vertex(f.v_second));
        const Vec2 probe = mid + 1e-6 * f.normal;
        if (inside_polygon(probe, vertex_polygon_[static_cast<size_t>(f.v_first)])) {
            throw ValidationError("face " + std::to_string(k) + " normal points inward");
        }
    }

    // Pairwise separation and disjointness.
    for (size_t a = 0; a < polygons_.size(); ++a) {
        for (size_t b = a + 1; b < polygons_.size(); ++b) {
            for (int idx : polygons_[b]) {
                if (inside_polygon(vertex(idx), static_cast<int>(a))) {
                    throw ValidationError("polygon " + std::to_string(b) + " overlaps polygon " +
                                          std::to_string(a) + " (vertex " + std::to_string(idx) +
                                          " at " + vec_str(vertex(idx)) + ")");
                }
            }
            for (int idx : polygons_[a]) {
                if (inside_polygon(vertex(idx), static_cast<int>(b))) {
                    throw ValidationError("polygon " + std::to_string(a) + " overlaps polygon " +
                                          std::to_string(b) + ")");
                }
            }
            const double d = polygon_pair_distance(*this, static_cast<int>(a), static_cast<int>(b));
            if (d < clearance_ - 1e-9) {
                throw ValidationError("polygons " + std::to_string(a) + " and " +
                                      std::to_string(b) + " are separated by " + std::to_string(d) +
                                      " m, below the clearance of " + std::to_string(clearance_) +
                                      " m");
            }
        }
    }
}

double PolygonEnvironment::project_onto_face(const Vec2& p, int k) const {
    const Face& f = face(k);
    return (p - vertex(f.v_first)).dot(f.tangent);
}

double PolygonEnvironment::distance_to_face(const Vec2& p, int k) const {
    const Face& f = face(k);
    const double proj = project_onto_face(p, k);
    if (proj < 0.0) return (p - vertex(f.v_first)).norm();
    if (proj > f.length) return (p - vertex(f.v_second)).norm();
    const Vec2 foot = vertex(f.v_first) + proj * f.tangent;
    return (p - foot).norm();
}

double PolygonEnvironment::min_distance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < face_count(); ++k) {
        best = std::min(best, distance_to_face(p, k));
    }
    return best;
}

bool PolygonEnvironment::inside_polygon(const Vec2& p, int poly) const {
    // Crossing-number test; boundary points are resolved separately.
    const auto& ring = polygons_[static_cast<size_t>(poly)];
    const size_t m = ring.size();
    bool inside = false;
    for (size_t j = 0, k = m - 1; j < m; k = j++) {
        const Vec2& a = vertices_[static_cast<size_t>(ring[j])];
        const Vec2& b = vertices_[static_cast<size_t>(ring[k])];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

bool PolygonEnvironment::point_free(const Vec2& p) const {
    for (int k = 0; k < face_count(); ++k) {
        if (distance_to_face(p, k) <= 0.0) return false;  // boundary contact
    }
    for (size_t l = 0; l < polygons_.size(); ++l) {
        if (inside_polygon(p, static_cast<int>(l))) return false;
    }
    return true;
}

void PolygonEnvironment::bounds(Vec2& lo, Vec2& hi) const {
    lo = Vec2(0.0, 0.0);
    hi = Vec2(0.0, 0.0);
    if (vertices_.empty()) return;
    lo = hi = vertices_[0];
    for (const Vec2& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

PolygonEnvironment inflate_environment(const PolygonEnvironment& env, double radius) {
    if (radius < 0.0) throw ValidationError("inflation radius must be non-negative");
    if (radius == 0.0) return env;

    std::vector<Vec2> inflated = env.vertices();
    for (int i = 0; i < env.vertex_count(); ++i) {
        const auto [k_in, k_out] = env.incident_faces(i);
        const Vec2& n1 = env.face(k_in).normal;
        const Vec2& n2 = env.face(k_out).normal;
        // Miter join: intersection of the two offset edge lines,
        //   p . n1 = v . n1 + R,  p . n2 = v . n2 + R.
        const Vec2& v = env.vertex(i);
        const double det = cross2(n1, n2);
        if (std::fabs(det) < 1e-12) {
            throw ValidationError("cannot miter-offset vertex " + std::to_string(i) +
                                  ": incident edges are nearly parallel");
        }
        const double r1 = v.dot(n1) + radius;
        const double r2 = v.dot(n2) + radius;
        inflated[static_cast<size_t>(i)] =
            Vec2((r1 * n2.y() - r2 * n1.y()) / det, (r2 * n1.x() - r1 * n2.x()) / det);
    }

    try {
        return PolygonEnvironment(std::move(inflated), env.polygons(), 0.0);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("environment invalid after inflation by ") +
                              std::to_string(radius) + " m: " + e.what());
    }
}

double polygon_pair_distance(const PolygonEnvironment& env, int poly_a, int poly_b) {
    const auto& ra = env.polygons()[static_cast<size_t>(poly_a)];
    const auto& rb = env.polygons()[static_cast<size_t>(poly_b)];
    double best = std::numeric_limits<double>::infinity();
    const size_t ma = ra.size(), mb = rb.size();
    for (size_t i = 0; i < ma; ++i) {
        const Vec2& a0 = env.vertex(ra[i]);
        const Vec2& a1 = env.vertex(ra[(i + 1) % ma]);
        for (size_t j = 0; j < mb; ++j) {
            const Vec2& b0 = env.vertex(rb[j]);
            const Vec2& b1 = env.vertex(rb[(j + 1) % mb]);
            best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
        }
    }
    return best;
}

double segment_point_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
    const Vec2 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const double c = cross2(q - p, r - p);
        if (c > 0.0) return 1;
        if (c < 0.0) return -1;
        return 0;
    };
    const int o1 = orient(a0, a1, b0);
    const int o2 = orient(a0, a1, b1);
    const int o3 = orient(b0, b1, a0);
    const int o4 = orient(b0, b1, a1);
    if (o1 != o2 && o3 != o4) return true;

    const auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::min(p.x(), r.x()) <= q.x() && q.x() <= std::max(p.x(), r.x()) &&
               std::min(p.y(), r.y()) <= q.y() && q.y() <= std::max(p.y(), r.y());
    };
    if (o1 == 0 && on_segment(a0, b0, a1)) return true;
    if (o2 == 0 && on_segment(a0, b1, a1)) return true;
    if (o3 == 0 && on_segment(b0, a0, b1)) return true;
    if (o4 == 0 && on_segment(b0, a1, b1)) return true;
    return false;
}

double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min(std::min(segment_point_distance(a0, a1, b0), segment_point_distance(a0, a1, b1)),
                    std::min(segment_point_distance(b0, b1, a0), segment_point_distance(b0, b1, a1)));
}

bool segment_free(const PolygonEnvironment& env, const Vec2& a, const Vec2& b) {
    if (!env.point_free(a) || !env.point_free(b)) return false;
    for (const auto& ring : env.polygons()) {
        const size_t m = ring.size();
        for (size_t j = 0; j < m; ++j) {
            const Vec2& e0 = env.vertex(ring[j]);
            const Vec2& e1 = env.vertex(ring[(j + 1) % m]);
            if (segments_intersect(a, b, e0, e1)) return false;
        }
    }
    return true;
}

}  // namespace polyplan
