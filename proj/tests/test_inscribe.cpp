#include "knotspan/inscribe.hpp"

#include <gtest/gtest.h>

using namespace knotspan;
using namespace knotspan::inscribe;
using curves::SampledCurve;

namespace {

SampledCurve open_curve(std::vector<Point3> pts) { return SampledCurve::from_points(std::move(pts), false); }

SampledCurve circle_arc(double r, double length, int samples) {
    std::vector<Point3> pts;
    for (int i = 0; i <= samples; ++i) {
        const double s = length * i / samples;
        pts.emplace_back(r * std::sin(s / r), r - r * std::cos(s / r), 0.0);
    }
    return open_curve(pts);
}

// y = A sin(w x) cut at arclength `length`.
SampledCurve sinusoid_arc(double A, double w, double length) {
    std::vector<Point3> pts;
    double s = 0.0;
    const double dx = 1e-5;
    pts.emplace_back(0, 0, 0);
    for (double x = dx; s < length; x += dx) {
        Point3 p(x, A * std::sin(w * x), 0);
        s += (p - pts.back()).norm();
        pts.push_back(p);
    }
    auto c = open_curve(pts);
    auto cut = c.sub_arc(0.0, length);
    // Keep every 20th sample to stay light.
    std::vector<Point3> thin;
    for (std::size_t i = 0; i < cut.size(); i += 20) thin.push_back(cut.samples[i]);
    thin.push_back(cut.samples.back());
    return open_curve(thin);
}

}  // namespace

TEST(Theta, StrictlyIncreasing) {
    double prev = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double a = 0.01 * k;
        const double t = theta(a);
        EXPECT_GT(t, prev);
        EXPECT_GE(t, a);  // 2 asin(a/2) >= a
        prev = t;
    }
}

TEST(Inscribe, UnitCircleCount) {
    const auto c = curves::make_circle(1.0, 202 * 16);
    const auto ip = inscribe_polygon(c, 1.0);
    EXPECT_EQ(ip.n, 202u);
    for (double a : ip.a_values) {
        EXPECT_NEAR(a, 2 * M_PI / 202, 1e-12);
        EXPECT_GE(a, 1.0 / 33);
        EXPECT_LE(a, 1.0 / 32);
    }
    for (const auto& z : ip.vertices) EXPECT_NEAR(z.norm(), 1.0, 1e-9);
}

TEST(Inscribe, RopelengthInvariantCount) {
    const auto c = curves::make_circle(2.0, 4000);
    EXPECT_EQ(inscribe_polygon(c, 2.0).n, 202u);
}

TEST(Inscribe, RejectsRadiusAboveThickness) {
    const auto c = curves::make_circle(1.0, 4000);
    EXPECT_THROW(inscribe_polygon(c, 1.01), Error);
}

TEST(Inscribe, RejectsCoarseSampling) {
    const auto c = curves::make_circle(1.0, 600);
    EXPECT_THROW(inscribe_polygon(c, 1.0), Error);
}

TEST(ConeLemma, StraightSegment) {
    std::vector<Point3> pts;
    for (int i = 0; i <= 50; ++i) pts.emplace_back(0.01 * i, 0, 0);
    const auto rep = verify_cone_lemma(open_curve(pts), 1.0);
    EXPECT_NEAR(rep.max_tangent_angle, 0.0, 1e-12);
    EXPECT_TRUE(rep.containment);
    EXPECT_TRUE(rep.angle_ok);
}

TEST(ConeLemma, CircleArcAngleEqualsA) {
    const double r = 1.5, a = 0.8;
    const auto rep = verify_cone_lemma(circle_arc(r, a * r, 400), r);
    EXPECT_NEAR(rep.a, a, 1e-4);
    EXPECT_NEAR(rep.max_tangent_angle, a, 1e-4);
    EXPECT_LE(rep.max_tangent_angle, theta(a));
    EXPECT_TRUE(rep.containment);
}

TEST(ConeLemma, HelixAtCurvatureLimit) {
    // Helix (R cos u, R sin u, c u) has curvature R / (R^2 + c^2).
    const double R = 0.6, c = std::sqrt(0.6 * 0.4);
    const double r = (R * R + c * c) / R;
    const double speed = std::sqrt(R * R + c * c);
    const double len = r / 32;
    std::vector<Point3> pts;
    for (int i = 0; i <= 200; ++i) {
        const double u = (len / speed) * i / 200;
        pts.emplace_back(R * std::cos(u), R * std::sin(u), c * u);
    }
    const auto rep = verify_cone_lemma(open_curve(pts), r);
    EXPECT_TRUE(rep.containment);
    EXPECT_TRUE(rep.angle_ok);
}

TEST(ConeLemma, CurvatureViolationNamesSample) {
    try {
        verify_cone_lemma(circle_arc(0.5, 0.4, 100), 1.0);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("sample"), std::string::npos);
    }
}

TEST(ChordBound, StraightAndCircle) {
    std::vector<Point3> pts;
    for (int i = 0; i <= 10; ++i) pts.emplace_back(0.03 * i, 0, 0);
    const auto s = verify_chord_bound(open_curve(pts), 1.0);
    EXPECT_NEAR(s.ratio, 1.0, 1e-14);
    EXPECT_TRUE(s.ok());

    const double a = 1.0 / 32;
    const auto c = verify_chord_bound(circle_arc(1.0, a, 4000), 1.0);
    const double exact = std::pow(2 * std::sin(a / 2) / a, 2);
    EXPECT_NEAR(c.ratio, exact, 1e-11);
    EXPECT_NEAR(c.bound, std::cos(4 * std::asin(1.0 / 64)), 1e-12);
    EXPECT_TRUE(c.ok());
}

TEST(ChordBound, Sinusoid) {
    // Max curvature A w^2 = 0.5 <= 1/r.
    const auto arc = sinusoid_arc(0.02, 5.0, 0.4);
    const auto k = curves::curvature_profile(arc);
    EXPECT_LE(*std::max_element(k.begin(), k.end()), 1.0);
    const auto rep = verify_chord_bound(arc, 1.0);
    EXPECT_NEAR(rep.a, 0.4, 1e-9);
    EXPECT_TRUE(rep.ok());
}

TEST(ChordBound, RejectsLargeA) {
    EXPECT_THROW(verify_chord_bound(circle_arc(1.0, 0.6, 50), 1.0), InputError);
}

TEST(Cone, DistanceOracle) {
    Cone c{{0, 0, 0}, {0, 0, 1}, 2.0, M_PI / 4, {0, 0, 2}};
    EXPECT_EQ(c.distance({0.1, 0, 1}), 0.0);
    EXPECT_NEAR(c.distance({0, 0, -1}), 1.0, 1e-15);
    EXPECT_NEAR(c.distance({0, 0, 3}), 1.0, 1e-15);
    // Beyond the lateral surface: distance along the outward normal.
    EXPECT_NEAR(c.distance({1, 0, 0}), std::sqrt(0.5), 1e-15);
    EXPECT_TRUE(c.contains({2, 0, 2}, 1e-12));
    EXPECT_FALSE(c.contains({2.1, 0, 2}, 1e-12));
}

TEST(Cone, SeparationIsLowerBound) {
    Cone a{{0, 0, 0}, {0, 0, 1}, 1.0, 0.1, {0, 0, 1}};
    Cone b{{0, 0, 2}, {0, 0, 1}, 1.0, 0.1, {0, 0, 3}};
    const double s = cone_separation(a, b);
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
    Cone c{{0.05, 0, 0.5}, {1, 0, 0}, 1.0, 0.1, {1.05, 0, 0.5}};
    EXPECT_LE(cone_separation(a, c), 0.0);
}

TEST(Necklace, UnitCirclePasses) {
    const auto c = curves::make_circle(1.0, 202 * 16);
    const auto ip = inscribe_polygon(c, 1.0);
    const auto cones = build_cone_necklace(ip);
    ASSERT_EQ(cones.size(), 202u);
    const auto rep = check_necklace(ip, cones);
    EXPECT_TRUE(rep.ok());
    EXPECT_LT(rep.max_base_diameter, 0.01);
    EXPECT_GT(rep.min_nonadjacent_distance, 0.0);
    for (std::size_t j = 0; j < ip.n; ++j) {
        const auto cb = verify_chord_bound(ip.arc(j), ip.r);
        EXPECT_TRUE(cb.ok()) << j;
        EXPECT_GE(cb.ratio, std::cos(2 * theta(ip.a_values[j])));
    }
}

TEST(Necklace, StadiumPasses) {
    const auto c = curves::make_stadium(0.25, 0.6, 8000);
    const auto th = curves::thickness(c);
    const auto ip = inscribe_polygon(c, th.r);
    EXPECT_TRUE(curves::is_embedded(ip.polygon()));
    EXPECT_NO_THROW(build_cone_necklace(ip));
    for (std::size_t j = 0; j < ip.n; ++j) EXPECT_TRUE(verify_chord_bound(ip.arc(j), ip.r).ok()) << j;
}

TEST(Necklace, DoubledAngleOnTightCurveFails) {
    const auto c = curves::make_double_loop(1.0, 0.1, 4000);
    const double r = curves::thickness(c).r;
    // a close to 0.19 so doubled cones are wide enough to collide.
    const auto n = static_cast<std::size_t>(c.total_length / (0.19 * r));
    const auto ip = inscribe_polygon_uniform(c, r, n);
    EXPECT_THROW(build_cone_necklace(ip, {}, 8.0), Error);
    const auto rep = check_necklace(ip, necklace_cones(ip, 8.0), {}, true);
    EXPECT_FALSE(rep.ok());
    EXPECT_GE(rep.first_bad_i, 0);
}
