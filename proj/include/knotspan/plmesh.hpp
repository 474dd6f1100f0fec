#pragma once

#include "knotspan/curves.hpp"
#include "knotspan/trimesh.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace knotspan::plmesh {

using curves::PolygonalCurve;

/// Length-1 copy of P centred on its bounding-box centre.
struct Normalized {
    PolygonalCurve curve;
    Point3 center;
    double length = 0.0;
};

Normalized normalize(const PolygonalCurve& p);

/// Rotation R such that the xy-projection of R p is used.
struct Frame {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    std::size_t trial = 0;  // 0 is the identity
};

/// Regularity of the z-projection of a unit-length curve after rotation:
/// no near-vertical edge, no vertex near a non-incident edge, transverse
/// crossings, no triple points, distinct heights at each crossing. All
/// margins are `margin` at unit scale. On failure `why` names the condition.
bool is_regular(const PolygonalCurve& unit, const Eigen::Matrix3d& rotation, double margin,
                std::string* why = nullptr);

/// Identity first, then seeded random rotations. Throws Error after
/// max_trials rejected frames.
Frame find_regular_projection(const PolygonalCurve& p, std::uint64_t seed, std::size_t max_trials = 10000,
                              std::size_t first_trial = 0);

struct Crossing {
    std::size_t over_edge = 0;
    std::size_t under_edge = 0;
    double over_param = 0.0;
    double under_param = 0.0;
    Point2 point;
    double z_over = 0.0;
    double z_under = 0.0;
};

/// Vertices 0..n-1 are projected polygon vertices, n.. are crossings.
/// Fragment k runs along polygon edge fragment_edge[k].
struct ProjectionGraph {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    std::size_t n = 0;
    std::vector<Point2> vertices;
    std::vector<Point3> lifted;  // rotated 3D polygon vertices
    std::vector<Crossing> crossings;
    std::vector<std::pair<std::size_t, std::size_t>> fragments;
    std::vector<std::size_t> fragment_edge;
};

/// Throws Error when the frame is not regular for the curve.
ProjectionGraph build_projection_graph(const PolygonalCurve& unit, const Eigen::Matrix3d& rotation,
                                       double margin = 1e-7);

enum class VertexKind { Polygon, Crossing, Special, Outer };

struct AugmentedGraph {
    std::vector<Point2> vertices;
    std::vector<VertexKind> kind;
    std::vector<std::array<std::size_t, 3>> triangles;  // counterclockwise
    std::vector<bool> crossing_triangle;
    // Lifted heights: for crossings the over/under value, for specials on
    // fragments the height on P, for hull specials the interpolated value.
    std::vector<double> z_upper;
    std::vector<double> z_lower;
    std::vector<std::array<std::size_t, 2>> edges;
    std::size_t hull_size = 0;
    std::size_t crossings = 0;
};

/// Special vertices, crossing diamonds, ear-clipped faces, outer triangle of
/// circumradius 3 and the annulus. Throws Error when a diamond is blocked or
/// a face cannot be triangulated; callers retry with another frame.
AugmentedGraph augment_graph(const ProjectionGraph& pg);

struct TetMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::size_t, 4>> tets;
    Point3 center;
    double length = 1.0;
    std::size_t polygon_size = 0;
    std::size_t crossings = 0;
    std::size_t graph_vertices = 0;
    std::size_t graph_triangles = 0;
    std::size_t frame_trial = 0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

std::size_t tet_count_bound(std::size_t n);

/// Full pipeline; caller asserts P is unknotted. Throws Error naming the
/// stage on failure of any post-condition.
TetMesh build_ball_triangulation(const PolygonalCurve& p, std::uint64_t seed = 1, const Tolerance& tol = {});

struct TetReport {
    bool orientation = false;
    bool face_pairing = false;
    bool closed_boundary = false;
    bool convex = false;
    bool volume = false;
    bool polygon_in_skeleton = false;
    bool radius = false;
    bool count = false;
    double tet_volume = 0.0;
    double hull_volume = 0.0;
    double max_radius = 0.0;
    std::size_t tets = 0;
    std::size_t bound = 0;
    std::string first_failure;
    bool ok() const {
        return orientation && face_pairing && closed_boundary && convex && volume && polygon_in_skeleton && radius &&
               count;
    }
};

TetReport validate_tetmesh(const TetMesh& b, const PolygonalCurve& p, const Tolerance& tol = {});

/// Faces used by exactly one tet, oriented outward.
mesh::TriMesh boundary_surface(const TetMesh& b);

/// ASCII: "tet", counts, coordinates, then 4-index rows.
void write_tet(const TetMesh& b, std::ostream& out);

/// Star-shaped polygon with small height noise, randomly rotated; embedded
/// and unknotted by construction.
PolygonalCurve random_unknot(std::size_t n, std::uint64_t seed);

nlohmann::json to_json(const TetReport& r);

}  // namespace knotspan::plmesh
