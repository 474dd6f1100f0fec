#pragma once

#include "knotspan/geom.hpp"

#include <nlohmann/json_fwd.hpp>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace knotspan::curves {

/// Closed polygon. Vertex i connects to vertex (i+1) mod n.
struct PolygonalCurve {
    std::vector<Point3> vertices;
    bool closed = true;

    std::size_t edge_count() const { return closed ? vertices.size() : vertices.size() - 1; }
    geom::Segment edge(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }
    /// Throws InputError on fewer than 3 vertices, non-finite coordinates,
    /// or consecutive vertices closer than eps_len.
    void validate(const Tolerance& tol = {}) const;
};

/// Dense samples of a smooth curve together with their arclength values.
/// For closed curves the final gap runs from the last sample back to the
/// first and has length total_length - arclength.back().
struct SampledCurve {
    std::vector<Point3> samples;
    std::vector<double> arclength;
    bool closed = true;
    double total_length = 0.0;

    std::size_t size() const { return samples.size(); }
    /// Builds arclength from chord lengths.
    static SampledCurve from_points(std::vector<Point3> points, bool closed);
    /// Throws InputError unless the arclength values increase strictly and
    /// every coordinate is finite.
    void validate(const Tolerance& tol = {}) const;
    /// Dense-sampling invariant: every gap at most total_length/500 and each
    /// chord within 1% of its arclength gap.
    bool is_dense() const;
    double gap(std::size_t i) const;
    Point3 point_at(double s) const;
    /// Open sub-curve over arclength [s0, s1]; endpoints interpolated.
    SampledCurve sub_arc(double s0, double s1) const;
};

enum class LimitingFactor { Curvature, DoublyCritical };

const char* to_string(LimitingFactor f);

struct ThicknessReport {
    double r = 0.0;
    LimitingFactor limiting_factor = LimitingFactor::Curvature;
    std::size_t witness_i = 0;
    std::size_t witness_j = 0;  // equals witness_i for the curvature factor
    double ropelength = 0.0;
    double max_curvature = 0.0;
    double doubly_critical_distance = std::numeric_limits<double>::infinity();
    std::size_t doubly_critical_candidates = 0;
};

double length(const PolygonalCurve& c);
double length(const SampledCurve& c);

/// Reciprocal circumradius of consecutive sample triples (cyclic for closed
/// curves, one-sided at the ends of open ones). Collinear triples give 0.
std::vector<double> curvature_profile(const SampledCurve& c);

/// Unit tangents from the circle through each sample and its neighbours;
/// exact on circles.
std::vector<Vec3> tangent_profile(const SampledCurve& c);

/// r = min(1 / max curvature, half the shortest doubly-critical self
/// distance). Pairs closer than the curvature radius in arclength are never
/// treated as doubly critical. Throws Error when the sampling resolves a
/// corner (curvature >= 1/eps_len) and InputError for open curves.
ThicknessReport thickness(const SampledCurve& c, const Tolerance& tol = {});

/// max curvature <= 1/r + tolerance (self-consistency of a thickness report).
bool max_curvature_vs_thickness_check(const SampledCurve& c, const ThicknessReport& report,
                                      double rel_tol = 1e-9);

/// Non-adjacent edges farther apart than eps_len and adjacent edges not
/// folded back onto each other.
bool is_embedded(const PolygonalCurve& c, const Tolerance& tol = {});
/// Same test on the sample polyline of a sampled curve.
bool is_embedded(const SampledCurve& c, const Tolerance& tol = {});

/// Shortest distance from the curve to the y-axis.
double distance_to_y_axis(const PolygonalCurve& c);
double distance_to_y_axis(const SampledCurve& c);

// Test and fixture shapes.
SampledCurve make_circle(double radius, std::size_t samples);
SampledCurve make_ellipse(double a, double b, std::size_t samples);
/// Two semicircles of radius rho joined by straights of length `straight`.
SampledCurve make_stadium(double rho, double straight, std::size_t samples);
/// (2,1) torus curve: winds twice around the z-axis at radius R, its two
/// passes separated by a constant gap.
SampledCurve make_double_loop(double major_radius, double gap, std::size_t samples);

/// Apply x -> scale * R x + shift to every sample.
SampledCurve transformed(const SampledCurve& c, const Eigen::Matrix3d& rotation, const Vec3& shift,
                         double scale = 1.0);
PolygonalCurve transformed(const PolygonalCurve& c, const Eigen::Matrix3d& rotation,
                           const Vec3& shift, double scale = 1.0);

// Curve files: {kind: "polygonal"|"sampled", closed: true, points: [[x,y,z],...]}.
// Sampled curves may carry an optional "arclength" array and "total_length".
struct CurveFile {
    std::string kind;
    std::optional<PolygonalCurve> polygon;
    std::optional<SampledCurve> sampled;
};

nlohmann::json to_json(const PolygonalCurve& c);
nlohmann::json to_json(const SampledCurve& c);
nlohmann::json to_json(const ThicknessReport& r);
CurveFile curve_from_json(const nlohmann::json& j);
CurveFile read_curve_file(const std::string& path);

}  // namespace knotspan::curves
