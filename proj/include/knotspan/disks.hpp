#pragma once

#include "knotspan/curves.hpp"
#include "knotspan/trimesh.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace knotspan::disks {

using mesh::TriMesh;

struct SpanningDisk {
    TriMesh mesh;
    std::vector<std::size_t> boundary;  // ordered boundary loop
    std::optional<curves::PolygonalCurve> target;
};

/// Wraps a mesh; the boundary loop is taken from the mesh when it has exactly
/// one, otherwise left empty.
SpanningDisk make_disk(TriMesh m, std::optional<curves::PolygonalCurve> target = std::nullopt);
SpanningDisk read_disk(const std::string& off_path);

struct DiskReport {
    bool connected = false;
    bool euler = false;
    bool single_boundary = false;
    bool orientable = false;  // coherently oriented
    bool edge_manifold = false;
    bool embedded = false;
    bool boundary_on_target = false;
    long euler_characteristic = 0;
    std::size_t boundary_components = 0;
    std::size_t improper_pairs = 0;
    bool ok() const {
        return connected && euler && single_boundary && orientable && edge_manifold && embedded && boundary_on_target;
    }
};

/// Each invariant is checked independently. Without a target curve the
/// boundary check passes trivially.
DiskReport check_disk(const SpanningDisk& sd, const Tolerance& tol = {});

/// Triangle pairs meeting other than in a shared vertex or shared edge.
std::size_t improper_triangle_pairs(const TriMesh& m, const Tolerance& tol = {}, bool stop_at_first = false);

double mesh_area(const SpanningDisk& sd);

struct Line {
    Point3 point;
    Vec3 direction;
};

struct LineCount {
    std::size_t count = 0;
    std::size_t jitters = 0;
    Point3 used_point;  // point of the line actually counted
};

/// Number of triangle interiors pierced by the line. A hit closer than
/// eps_len to a triangle edge, or a triangle containing the direction,
/// triggers a seeded jitter of at most 10 eps_len perpendicular to the line.
/// Throws Error after 100 jitters.
LineCount line_intersection_count(const TriMesh& m, const Line& line, std::uint64_t seed = 0,
                                  const Tolerance& tol = {});

/// Area of the intersection of the rectangle [x0,x1] x [z0,z1] with the disk
/// of radius r about the origin.
double rect_disk_area(double x0, double x1, double z0, double z1, double r);

struct AreaCertificate {
    double r0 = 0.0;
    std::size_t resolution = 0;  // cells per side
    double certified_lower_bound = 0.0;
    double refined_bound = 0.0;  // at twice the resolution
    double extrapolated = 0.0;   // first-order Richardson estimate
    double c7_reference = 0.0;   // (pi r0^2 / 2) 2^n
    double mesh_area = 0.0;
    std::size_t min_multiplicity = 0;
    std::size_t max_multiplicity = 0;
    std::size_t jitters = 0;
    bool sound = false;  // mesh_area >= 0.95 * certified_lower_bound
};

/// Integrates the multiplicity of y-parallel lines over the xz-disk of
/// radius r0, cell weights being exact cell/disk overlaps. Throws Error when
/// the boundary comes within r0 of the y-axis.
AreaCertificate cylinder_area_certificate(const SpanningDisk& sd, double r0, std::size_t n,
                                          std::size_t resolution = 256, std::uint64_t seed = 0,
                                          const Tolerance& tol = {});

/// Closed-form gradient of the total area with respect to every vertex.
std::vector<Vec3> area_gradient(const TriMesh& m);

struct MinimizeOptions {
    double min_angle_deg = 1.0;
    std::size_t intersection_check_every = 10;
    double armijo = 1e-4;
    double rel_tol = 1e-12;  // stop when relative decrease stays below this
};

struct MinimizeResult {
    SpanningDisk disk;
    std::vector<double> area_log;  // area before the first and after every iteration
    std::vector<double> step_log;
    std::size_t iterations = 0;
    std::size_t step_halvings = 0;
    bool converged = false;
};

/// Boundary vertices stay fixed; interior vertices follow the area gradient
/// scaled by inverse vertex area, with Armijo backtracking so the area never
/// increases. Throws Error when the input violates the angle floor.
MinimizeResult minimize_area(const SpanningDisk& sd, std::size_t max_iters, const MinimizeOptions& opt = {},
                             const Tolerance& tol = {});

double boundary_length(const SpanningDisk& sd);
/// 4 pi A / L^2.
double isoperimetric_ratio(const SpanningDisk& sd);

double min_angle_deg(const TriMesh& m);

// Synthetic test surfaces.
/// Flat disk in the xy-plane: centre vertex and `rings` rings of 6k vertices.
TriMesh polar_disk(double radius, std::size_t rings);
/// polar_disk with z = height * (1 - rho / radius).
TriMesh cone_disk(double radius, double height, std::size_t rings);
/// polar_disk with z = amp * sin(2 pi rho) sin(3 phi) cos(pi rho / 2 / radius).
TriMesh wavy_disk(double radius, double amp, std::size_t rings);
/// Sheet crossing every y-parallel line near the y-axis `folds` times:
/// parallel layers y = const, |x| <= 1, |z| <= 1, joined by half-cylinder
/// folds at x = +-fold_x, extruded along z.
TriMesh folded_sheet(std::size_t folds, double gap, double fold_x = 0.5, std::size_t res = 40);

nlohmann::json to_json(const DiskReport& r);
nlohmann::json to_json(const AreaCertificate& c);
nlohmann::json to_json(const MinimizeResult& r);

}  // namespace knotspan::disks
