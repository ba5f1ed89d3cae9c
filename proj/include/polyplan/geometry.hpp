#pragma once

#include <string>
#include <vector>

#include "polyplan/vec.hpp"

namespace polyplan {

// One polygon edge, from vertex index first to vertex index second.
struct Face {
    int v_first = -1;
    int v_second = -1;
    Vec2 tangent;  // unit, first -> second
    Vec2 normal;   // unit, outward (tangent rotated -90 deg, rings CCW)
    double length = 0.0;
};

enum class VertexKind { Convex, Reflex };

// Static polygonal obstacle field. Rings are simple and counter-clockwise;
// every vertex belongs to exactly one ring, and the number of faces equals
// the number of vertices. Immutable after validation; all queries are pure.
class PolygonEnvironment {
  public:
    PolygonEnvironment() = default;

    // Validates all structural invariants; throws ValidationError naming the
    // first offending vertex/ring on failure.
    PolygonEnvironment(std::vector<Vec2> vertices,
                       std::vector<std::vector<int>> polygons,
                       double clearance = 0.0);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::vector<int>>& polygons() const { return polygons_; }
    const std::vector<Face>& faces() const { return faces_; }
    double clearance() const { return clearance_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }
    const Vec2& vertex(int i) const { return vertices_[static_cast<size_t>(i)]; }
    const Face& face(int k) const { return faces_[static_cast<size_t>(k)]; }

    // Ring that vertex i belongs to.
    int polygon_of_vertex(int i) const { return vertex_polygon_[static_cast<size_t>(i)]; }
    VertexKind vertex_convexity(int i) const { return vertex_kind_[static_cast<size_t>(i)]; }

    // Incident faces of vertex i: .first ends at i, .second starts at i.
    std::pair<int, int> incident_faces(int i) const {
        return {face_ending_at_[static_cast<size_t>(i)], face_starting_at_[static_cast<size_t>(i)]};
    }

    // Signed projection of p along face k's tangent, measured from the first
    // vertex. In [0, length] when the perpendicular foot is on the segment.
    double project_onto_face(const Vec2& p, int k) const;

    // Distance from p to the nearest point of face k (always >= 0).
    double distance_to_face(const Vec2& p, int k) const;

    // Distance from p to the nearest obstacle boundary point.
    double min_distance(const Vec2& p) const;

    // True iff p is strictly outside every polygon. Points exactly on an
    // obstacle boundary are not free (contact is legal only at junctions).
    bool point_free(const Vec2& p) const;

    // True iff p is strictly inside ring `poly` (boundary excluded).
    bool inside_polygon(const Vec2& p, int poly) const;

    // Axis-aligned bounds over all vertices. Zero box when empty.
    void bounds(Vec2& lo, Vec2& hi) const;

  private:
    void build_and_validate();

    std::vector<Vec2> vertices_;
    std::vector<std::vector<int>> polygons_;
    std::vector<Face> faces_;
    std::vector<int> vertex_polygon_;
    std::vector<int> face_starting_at_;
    std::vector<int> face_ending_at_;
    std::vector<VertexKind> vertex_kind_;
    double clearance_ = 0.0;
};

// Boundary states of the planning problem. The robot radius R is folded into
// the environment once via inflate_environment; the solver then treats the
// robot as a point.
struct BoundaryConditions {
    Vec2 p0{0.0, 0.0};
    Vec2 v0{0.0, 0.0};
    Vec2 pf{0.0, 0.0};
    Vec2 vf{0.0, 0.0};
    double t0 = 0.0;
    double tf = 1.0;
    double radius = 0.0;

    double horizon() const { return tf - t0; }
};

// Offsets every polygon outward by radius with miter joins and revalidates.
// Throws ValidationError if the inflated obstacles overlap.
PolygonEnvironment inflate_environment(const PolygonEnvironment& env, double radius);

// Minimum distance between the boundaries of two rings (0 if they touch).
double polygon_pair_distance(const PolygonEnvironment& env, int poly_a, int poly_b);

// Segment helpers shared by validation, baselines, and tests.
double segment_point_distance(const Vec2& a, const Vec2& b, const Vec2& p);
double segment_segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);
bool segments_intersect(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

// True iff the open segment (a, b) stays strictly outside all obstacles.
// Touching a boundary counts as a collision.
bool segment_free(const PolygonEnvironment& env, const Vec2& a, const Vec2& b);

}  // namespace polyplan
