#pragma once

#include "knotspan/curves.hpp"

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace knotspan::inscribe {

using curves::SampledCurve;

/// Closed polygon with vertices at equal arclength spacing on a sampled
/// curve. Vertex j sits at arclength s0 + j L/n.
struct InscribedPolygon {
    SampledCurve base;
    double r = 0.0;
    std::size_t n = 0;
    std::vector<Point3> vertices;
    std::vector<double> s_values;
    std::vector<double> a_values;

    curves::PolygonalCurve polygon() const { return {vertices, true}; }
    geom::Segment edge(std::size_t j) const { return {vertices[j], vertices[(j + 1) % n]}; }
    /// The arc of the base curve from z_j to z_{j+1}.
    SampledCurve arc(std::size_t j) const;
};

/// Solid right circular cone {apex + t u + w : 0 <= t <= h, |w| <= t tan(half_angle), w . u = 0}.
struct Cone {
    Point3 apex;
    Vec3 axis_dir;
    double h = 0.0;
    double half_angle = 0.0;
    Point3 base_center;

    double b() const;
    double base_radius() const { return b() * h; }
    /// Axial and radial coordinates of p relative to the apex.
    Point2 local(const Point3& p) const;
    bool contains(const Point3& p, double eps) const;
    /// Euclidean distance from p to the solid cone (0 inside).
    double distance(const Point3& p) const;
};

/// 2 arcsin(a/2).
double theta(double a);

/// n = floor(32 L / r) + 1 vertices. Throws Error when r exceeds the
/// measured thickness (relative slack 1e-6), when some a_j leaves
/// [1/33, 1/32], when an arc holds fewer than 4 samples, or when the polygon
/// is not embedded.
InscribedPolygon inscribe_polygon(const SampledCurve& c, double r, const Tolerance& tol = {});

/// Equal-spacing construction with caller-chosen n and no range checks. Used
/// to build deliberately coarse polygons.
InscribedPolygon inscribe_polygon_uniform(const SampledCurve& c, double r, std::size_t n);

struct ConeLemmaReport {
    double a = 0.0;
    double theta_a = 0.0;
    double max_tangent_angle = 0.0;
    bool angle_ok = false;
    bool containment = false;
};

/// Tangent spread of an arc of length a r and containment in the cone at
/// the arc start about T(0) with half-angle theta(a). Throws Error naming the
/// sample where curvature exceeds 1/r, InputError when a is outside (0, 1].
ConeLemmaReport verify_cone_lemma(const SampledCurve& arc, double r, const Tolerance& tol = {});

struct ChordBoundReport {
    double a = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    bool ratio_ok = false;
    bool in_cone = false;
    bool ok() const { return ratio_ok && in_cone; }
};

/// chord^2 / arc^2 against cos(2 theta(a)), and containment in the cone
/// about the chord with half-angle 2 theta(a). Throws InputError for a >= 1/2.
ChordBoundReport verify_chord_bound(const SampledCurve& arc, double r, const Tolerance& tol = {});

struct NecklaceReport {
    std::size_t cones = 0;
    std::size_t containment_failures = 0;
    std::size_t disjointness_failures = 0;
    std::size_t adjacency_failures = 0;
    std::size_t pairs_checked = 0;
    double min_nonadjacent_distance = 0.0;
    double max_base_diameter = 0.0;
    // First offending pair (or arc index twice for containment).
    long first_bad_i = -1;
    long first_bad_j = -1;
    bool ok() const {
        return containment_failures == 0 && disjointness_failures == 0 && adjacency_failures == 0;
    }
};

/// One cone per edge: apex z_j, axis along e_j, half-angle
/// angle_factor * theta(a_j).
std::vector<Cone> necklace_cones(const InscribedPolygon& ip, double angle_factor = 4.0);

/// Containment of every arc (samples and gap midpoints), disjointness of
/// non-adjacent cones, and point contact of adjacent cones.
NecklaceReport check_necklace(const InscribedPolygon& ip, const std::vector<Cone>& cones,
                              const Tolerance& tol = {}, bool stop_at_first = false);

/// Builds and checks; throws Error with the offending index pair on failure.
std::vector<Cone> build_cone_necklace(const InscribedPolygon& ip, const Tolerance& tol = {},
                                      double angle_factor = 4.0);

/// Lower estimate of the distance between two solid cones from 64 x 32
/// lateral samples, base-disk rings and apexes of each, minus the sampling
/// resolution. Positive means certainly disjoint.
double cone_separation(const Cone& c1, const Cone& c2);

nlohmann::json to_json(const Cone& c);
nlohmann::json to_json(const std::vector<Cone>& cones);
nlohmann::json to_json(const NecklaceReport& r);

}  // namespace knotspan::inscribe
