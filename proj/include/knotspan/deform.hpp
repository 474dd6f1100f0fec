#pragma once

#include "knotspan/inscribe.hpp"
#include "knotspan/trimesh.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <vector>

namespace knotspan::deform {

using inscribe::Cone;
using mesh::TriMesh;

/// sigma(w) = w + (1 - |w|/d) q on the closed disk of radius d.
struct RadialDiskMap {
    Point2 q = Point2::Zero();
    double d = 1.0;

    /// Throws InputError unless d > 0 and |q| < d.
    void validate() const;
};

/// Throws InputError for |w| > d.
Point2 sigma_apply(const RadialDiskMap& m, const Point2& w);
/// Bisection on |w| to 1e-12 relative; the scalar equation has a unique root.
Point2 sigma_inverse(const RadialDiskMap& m, const Point2& p);

struct LipschitzReport {
    double bound = 0.0;
    double empirical = 0.0;
    double inverse_bound = 0.0;
    double inverse_empirical = 0.0;
    bool displacement_ok = false;
    std::size_t pairs = 0;
    bool ok() const;
};

/// Random pairs in the disk (half of them close together). Checks the forward
/// bound 1 + |q|/d (+1e-9), the inverse bound 1/(1 - |q|/d) (+1e-6) and
/// |sigma_q1(w) - sigma_q2(w)| <= |q1 - q2|.
LipschitzReport sigma_lipschitz_check(const RadialDiskMap& m, std::size_t trials, std::uint64_t seed = 1);

/// tau(x, y, t) = (sigma_{alpha(t), b t}(x, y), t) in the apex frame of a cone.
struct ConeMap {
    Cone cone;
    Vec3 e1, e2;
    // Driver samples: strictly increasing t with planar offsets.
    std::vector<double> t;
    std::vector<Point2> offset;
    double lipschitz_driver = 1.0;

    /// Driver is the cone axis (tau is the identity).
    static ConeMap axis(const Cone& c);
    /// Driver is the given arc from apex to base centre, reparametrized by
    /// the axial coordinate. Throws Error if the arc leaves the cone or
    /// is not strictly monotone in t after tie-breaking.
    static ConeMap from_arc(const Cone& c, const curves::SampledCurve& arc, const Tolerance& tol = {});

    Point2 driver_at(double t) const;
    Point3 to_world(const Point2& w, double t) const;
    /// (x, y, t) of p in the apex frame.
    Eigen::Vector3d to_local(const Point3& p) const;
};

/// Throws InputError when p is outside the closed cone (slack eps).
Point3 cone_map_apply(const ConeMap& m, const Point3& p, double eps = 1e-9);

struct ConeLipschitzReport {
    double lemma_bound = 0.0;
    double empirical = 0.0;
    double c_l = 0.0;
    bool within_five = false;
    bool ok() const { return empirical <= lemma_bound + 1e-6; }
};

/// lemma_bound = 4 sqrt(1 + b^2) + C_L + 2. Random pairs inside the cone,
/// half of them close together.
ConeLipschitzReport cone_lipschitz_check(const ConeMap& m, std::size_t trials, std::uint64_t seed = 1);

/// Cone maps on every necklace cone, identity elsewhere.
struct NecklaceMap {
    std::vector<ConeMap> maps;
    double eps = 1e-9;

    /// Index of a cone containing p, or -1.
    long locate(const Point3& p) const;
    Point3 apply(const Point3& p) const;
};

NecklaceMap build_necklace_map(const inscribe::InscribedPolygon& ip, const std::vector<Cone>& cones,
                               const Tolerance& tol = {});

/// Flat mesh spanning a planar P' that conforms to the cones: each inner
/// half-section of C_j is fanned from its rim vertex to `m` pieces of e_j, and
/// the remaining polygon is ear-clipped. Throws Error when P' is not planar.
TriMesh flat_necklace_mesh(const inscribe::InscribedPolygon& ip, const std::vector<Cone>& cones,
                           std::size_t m = 8, const Tolerance& tol = {});

struct DeformReport {
    double area_in = 0.0;
    double area_out = 0.0;
    double ratio = 0.0;
    double max_boundary_residual = 0.0;
    double empirical_lipschitz = 0.0;
    std::size_t refinement_rounds = 0;
    std::size_t triangles_in_cones = 0;
};

/// Refines triangles straddling a cone boundary by longest-edge bisection (at
/// most 12 rounds), then maps every vertex. The boundary residual is the
/// largest distance from a mapped boundary vertex to the sample polyline of
/// `curve`. Throws Error when refinement cannot separate some triangle.
std::pair<TriMesh, DeformReport> necklace_map_mesh(const NecklaceMap& nm, const TriMesh& mesh,
                                                   const curves::SampledCurve& curve, const Tolerance& tol = {});

nlohmann::json to_json(const DeformReport& r);
nlohmann::json to_json(const ConeLipschitzReport& r);
nlohmann::json to_json(const LipschitzReport& r);

}  // namespace knotspan::deform
