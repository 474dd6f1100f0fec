#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace knotspan {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Point2 = Eigen::Vector2d;

/// Base class for every error raised by the library. `stage` names the
/// module or pipeline step that failed so CLI reports can route it.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// Malformed caller input (bad files, violated preconditions).
class InputError : public Error {
public:
    using Error::Error;
};

struct Tolerance {
    double eps_len = 1e-9;
    double eps_ang = 1e-9;

    /// Throws when either field is non-positive.
    void validate() const;
};

namespace geom {

struct Segment {
    Point3 a;
    Point3 b;
};

using Triangle = std::array<Point3, 3>;

enum class TriTriClass { Disjoint, SharedVertex, SharedEdge, Improper };

const char* to_string(TriTriClass c);

bool is_finite(const Point3& p);

/// Closest points between two closed segments. Returns {s, t} with
/// closest points a.a + s (a.b - a.a) and b.a + t (b.b - b.a).
std::pair<double, double> closest_segment_params(const Segment& s1, const Segment& s2);

/// Minimum Euclidean distance between closed segments. Symmetric in its
/// arguments. Throws InputError for a segment with coincident endpoints.
double segment_distance(const Segment& s1, const Segment& s2, const Tolerance& tol = {});

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b);
double point_segment_distance_2d(const Point2& p, const Point2& a, const Point2& b);

double cross2(const Point2& a, const Point2& b);
/// Twice the signed area of (a, b, c); positive when counterclockwise.
double orient2d(const Point2& a, const Point2& b, const Point2& c);

/// Convex hull, counterclockwise, starting from the lowest (then leftmost)
/// point. Collinear boundary points are dropped. Throws InputError when
/// fewer than 3 points are given or all points are collinear.
std::vector<Point2> convex_hull_2d(std::span<const Point2> points, const Tolerance& tol = {});

/// Same as convex_hull_2d but returns indices into `points`.
std::vector<std::size_t> convex_hull_2d_indices(std::span<const Point2> points,
                                                const Tolerance& tol = {});

double triangle_area(const Point3& a, const Point3& b, const Point3& c);

/// Classifies how two closed triangles meet. "Improper" means they intersect
/// in anything other than a common vertex or a common full edge. Throws
/// InputError when either triangle has area below eps_len^2.
TriTriClass triangle_triangle_intersect(const Triangle& t1, const Triangle& t2,
                                        const Tolerance& tol = {});

/// Closed segment vs closed triangle test in 3D (coplanar handled).
bool segment_intersects_triangle(const Point3& p, const Point3& q, const Triangle& t, double eps);

/// Segments in the plane intersect (closed, with tolerance).
bool segments_intersect_2d(const Point2& a, const Point2& b, const Point2& c, const Point2& d,
                           double eps);

bool point_in_triangle_2d(const Point2& p, const Point2& a, const Point2& b, const Point2& c,
                          double eps);

/// Ear-clipping triangulation of a simple polygon given in counterclockwise
/// order. Returns index triples into `poly`. Convex polygons are fanned from
/// index 0. Throws Error when the polygon is not simple enough to clip.
std::vector<std::array<std::size_t, 3>> triangulate_polygon(std::span<const Point2> poly,
                                                            double eps);

}  // namespace geom
}  // namespace knotspan
