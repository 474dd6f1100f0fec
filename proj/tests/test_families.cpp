#include "knotspan/families.hpp"
#include "knotspan/plmesh.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

using namespace knotspan;
using namespace knotspan::families;

namespace {

// Distance from the origin to a segment of the xz-plane.
double axis_distance(const Point3& a, const Point3& b) {
    const double ax = a.x(), az = a.z(), dx = b.x() - a.x(), dz = b.z() - a.z();
    const double dd = dx * dx + dz * dz;
    const double t = dd > 0 ? std::clamp(-(ax * dx + az * dz) / dd, 0.0, 1.0) : 0.0;
    return std::hypot(ax + t * dx, az + t * dz);
}

double polygon_axis_distance(const PolygonalCurve& c) {
    double d = 1e300;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) {
        d = std::min(d, axis_distance(c.vertices[i], c.vertices[(i + 1) % c.vertices.size()]));
    }
    return d;
}

double perimeter(const std::vector<Point3>& v, bool closed) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s += (v[i + 1] - v[i]).norm();
    if (closed) s += (v.front() - v.back()).norm();
    return s;
}

double point_polyline_distance(const Point3& p, const std::vector<Point3>& v) {
    double d = 1e300;
    for (std::size_t i = 0; i < v.size(); ++i) {
        d = std::min(d, geom::point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
    }
    return d;
}

}  // namespace

TEST(Braid, AlphaBlock) {
    const auto a = alpha_block();
    EXPECT_NO_THROW(a.validate());
    EXPECT_EQ(a.segment_count(), 12u);
    EXPECT_NEAR(a.length(), 1.0, 1e-12);
    const std::array<std::size_t, 4> perm{2, 0, 1, 3};
    EXPECT_EQ(a.permutation(), perm);
    std::size_t out_of_plane = 0;
    for (const auto& s : a.strands) {
        bool off = false;
        for (const auto& p : s.points) off = off || std::abs(p.y()) > 0;
        out_of_plane += off;
    }
    EXPECT_EQ(out_of_plane, 1u);
}

TEST(Braid, StackAdditiveAndMirror) {
    const auto a = alpha_block();
    for (std::size_t n : {1, 2, 5, 17}) {
        const auto s = stack(a, n);
        EXPECT_NO_THROW(s.validate());
        EXPECT_NEAR(s.length(), static_cast<double>(n) * a.length(), 1e-12 * static_cast<double>(n));
        EXPECT_NEAR(s.height, static_cast<double>(n) * a.height, 1e-12);
    }
    const auto m = mirrored(a);
    EXPECT_NO_THROW(m.validate());
    EXPECT_EQ(m.word, "s2 S1");
    // Stacking a block with its mirror gives the identity permutation.
    auto p = a.permutation(), q = m.permutation();
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(q[p[i]], i);
    EXPECT_THROW(stack(a, 0), InputError);
}

TEST(Kn, K1EdgeBudgetAndLength) {
    const auto k = generate_Kn(1);
    EXPECT_LE(k.curve.edge_count(), 64u);
    EXPECT_NEAR(perimeter(k.curve.vertices, true), 1.0, 1e-9);
    EXPECT_TRUE(curves::is_embedded(k.curve));
}

TEST(Kn, ClosingArcs) {
    for (std::size_t n : {1, 3, 10}) {
        const auto k = generate_Kn(n);
        ASSERT_EQ(k.arcs.size(), 8u);
        std::size_t segments = 0;
        double len = 0;
        for (const auto& a : k.arcs) {
            segments += a.points.size() - 1;
            len += perimeter(a.points, false);
            for (const auto& p : a.points) EXPECT_EQ(p.y(), 0.0);
            // Vertical end segments.
            EXPECT_NEAR(a.points[0].x(), a.points[1].x(), 1e-15);
            EXPECT_NEAR(a.points.back().x(), a.points[a.points.size() - 2].x(), 1e-15);
        }
        EXPECT_EQ(segments, 40u);
        EXPECT_NEAR(len, 1.0 / 3.0, 1e-12);
        double top = 0, bottom = 0;
        for (double l : k.top_edge_lengths) top += l;
        for (double l : k.bottom_edge_lengths) bottom += l;
        EXPECT_NEAR(top, 1.0 / 3.0, 1e-12);
        EXPECT_NEAR(bottom, 1.0 / 3.0, 1e-12);
    }
}

TEST(Kn, SweepInvariants) {
    for (std::size_t n = 1; n <= 64; ++n) {
        const auto k = generate_Kn(n);
        EXPECT_LE(k.curve.edge_count(), 24 * n + 40) << n;
        EXPECT_NEAR(perimeter(k.curve.vertices, true), 1.0, 1e-9) << n;
        EXPECT_GE(polygon_axis_distance(k.curve), 0.01) << n;
        EXPECT_GT(k.leg, 0.0) << n;
        if (n <= 16) {
            EXPECT_TRUE(curves::is_embedded(k.curve)) << n;
        }
        auto t = k.top_edge_lengths, b = k.bottom_edge_lengths;
        std::sort(t.begin(), t.end());
        std::sort(b.begin(), b.end());
        ASSERT_EQ(t.size(), b.size());
        for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(t[i], b[i], 1e-9);
    }
}

TEST(Kn, InvalidIndex) {
    EXPECT_THROW(generate_Kn(0), InputError);
    EXPECT_THROW(generate_Kn(10001), InputError);
    EXPECT_NO_THROW(generate_Kn(10000));
}

TEST(Kn, BallTriangulationOfK1) {
    const auto k = generate_Kn(1);
    const auto ball = plmesh::build_ball_triangulation(k.curve, 3);
    const auto rep = plmesh::validate_tetmesh(ball, k.curve);
    EXPECT_TRUE(rep.ok()) << rep.first_failure;
    EXPECT_LE(rep.max_radius, 4.0 * (1 + 1e-12));
    EXPECT_LT(rep.tets, plmesh::tet_count_bound(k.curve.edge_count()));
}

TEST(Kn, GoldenFixture) {
    for (std::size_t n : {1, 2}) {
        std::ifstream in(std::string(KNOTSPAN_FIXTURE_DIR) + "/k" + std::to_string(n) + ".json");
        ASSERT_TRUE(in) << n;
        const auto file = curves::curve_from_json(nlohmann::json::parse(in));
        ASSERT_TRUE(file.polygon);
        const auto k = generate_Kn(n);
        ASSERT_EQ(file.polygon->vertices.size(), k.curve.vertices.size());
        for (std::size_t i = 0; i < k.curve.vertices.size(); ++i) {
            EXPECT_LE((file.polygon->vertices[i] - k.curve.vertices[i]).norm(), 1e-12);
        }
    }
}

TEST(Verify, K5PassesAndShiftedFails) {
    const auto k = generate_Kn(5);
    const auto rep = verify_family(k.curve, 5);
    EXPECT_TRUE(rep.ok());
    const auto moved = curves::transformed(k.curve, Eigen::Matrix3d::Identity(), Vec3(0.005, 0, 0));
    const auto bad = verify_family(moved, 5);
    EXPECT_FALSE(bad.ok());
    for (const auto& [name, pass] : bad.checks) EXPECT_EQ(pass, name != "clearance") << name;
    const auto j = to_json(bad);
    EXPECT_FALSE(j["checks"]["clearance"].get<bool>());
}

TEST(Delta, ThicknessRatioSweep) {
    const double k = smooth_family_params().k;
    ASSERT_GT(k, 0.0);
    ASSERT_LT(k, 1.0);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto d = generate_Delta(n);
        EXPECT_NEAR(d.curve.total_length, 1.0, 1e-9);
        EXPECT_TRUE(d.curve.is_dense());
        const double ratio = curves::thickness(d.curve).r * 3.0 * static_cast<double>(n) / k;
        EXPECT_GE(ratio, 1.0) << n;
        EXPECT_LE(ratio, 2.0) << n;
    }
}

TEST(Delta, ArclengthMatchesChords) {
    const auto d = generate_Delta(3);
    const double chords = perimeter(d.curve.samples, true);
    EXPECT_LE(chords, 1.0);
    EXPECT_GE(chords, 1.0 - 2e-4);
    for (std::size_t i = 1; i < d.curve.size(); ++i) {
        const double gap = d.curve.arclength[i] - d.curve.arclength[i - 1];
        EXPECT_GE(gap * (1 + 1e-12), (d.curve.samples[i] - d.curve.samples[i - 1]).norm());
    }
}

TEST(Delta, HausdorffToKn) {
    for (std::size_t n : {1, 4}) {
        const auto d = generate_Delta(n);
        const auto k = generate_Kn(n);
        const double rho = smooth_family_params().fillet / static_cast<double>(n);
        std::vector<Point3> raw;
        for (const auto& p : d.curve.samples) raw.push_back(p * d.raw_length);
        double h = 0;
        for (const auto& p : raw) h = std::max(h, point_polyline_distance(p, k.curve.vertices));
        for (const auto& p : k.curve.vertices) h = std::max(h, point_polyline_distance(p, raw));
        EXPECT_LE(h, rho) << n;
        EXPECT_LE(d.hausdorff_to_kn, rho);
        EXPECT_NEAR(d.hausdorff_to_kn, h, 0.05 * rho);
    }
}

TEST(Delta, BlendStaysOutsideCylinder) {
    for (std::size_t n : {2, 5}) {
        for (int s = 1; s <= 8; ++s) {
            const auto d = generate_Delta(n, s / 8.0);
            EXPECT_GE(curves::distance_to_y_axis(d.curve), 0.01) << n << " " << s;
            EXPECT_TRUE(curves::is_embedded(d.curve));
        }
    }
    EXPECT_THROW(generate_Delta(2, 0.0), InputError);
    EXPECT_THROW(generate_Delta(2, 1.5), InputError);
}

TEST(Delta, VerifyPasses) {
    const auto d = generate_Delta(3);
    const auto rep = verify_family(d.curve, Family::Delta, 3);
    EXPECT_TRUE(rep.ok());
    EXPECT_GT(rep.thickness, 0.0);
}

TEST(Gamma, CurvatureCapAndLength) {
    const double K0 = smooth_family_params().K0;
    double prev = 1e300;
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto g = generate_Gamma(n);
        EXPECT_NEAR(g.curve.total_length, 1.0, 1e-9);
        const auto kappa = curves::curvature_profile(g.curve);
        EXPECT_LE(*std::max_element(kappa.begin(), kappa.end()), K0) << n;
        double kb = 0;
        ASSERT_EQ(g.braid_samples.size(), 8u);
        for (const auto& [a, b] : g.braid_samples) {
            for (std::size_t i = a; i < b; ++i) kb = std::max(kb, kappa[i]);
        }
        EXPECT_LT(kb, prev) << n;
        prev = kb;
    }
}

TEST(Gamma, LengthByRefinedQuadrature) {
    // Chord sums converge quadratically; Richardson-extrapolate two resolutions.
    const auto g = generate_Gamma(2);
    std::vector<Point3> half;
    for (std::size_t i = 0; i < g.curve.size(); i += 2) half.push_back(g.curve.samples[i]);
    const double fine = perimeter(g.curve.samples, true), coarse = perimeter(half, true);
    EXPECT_NEAR(fine + (fine - coarse) / 3.0, 1.0, 2e-5);
}

TEST(Gamma, Verify8) {
    const auto g = generate_Gamma(8);
    const auto rep = verify_family(g.curve, Family::Gamma, 8);
    EXPECT_TRUE(rep.ok()) << to_json(rep).dump();
    EXPECT_LE(rep.max_curvature, smooth_family_params().K0);
}

TEST(Params, Schedule) {
    for (std::size_t n = 1; n < 20; ++n) EXPECT_GT(SmoothFamilyParams::lambda(n), SmoothFamilyParams::lambda(n + 1));
    EXPECT_GT(smooth_family_params().K0, 0.0);
    EXPECT_EQ(family_from_string("gamma"), Family::Gamma);
    EXPECT_EQ(to_string(Family::Delta), "delta");
    EXPECT_THROW(family_from_string("x"), InputError);
}

TEST(Constants, OnlyC7Numeric) {
    const auto c = theorem_constants(0.01);
    std::size_t numeric = 0;
    bool both_readings = false;
    for (const auto& e : c) {
        numeric += e.numeric;
        EXPECT_FALSE(e.role.empty());
        if (e.name == "c7") {
            EXPECT_DOUBLE_EQ(e.value, M_PI * 1e-4 / 2);
        }
        if (e.name == "C0") both_readings = e.definition.find("33^2") != std::string::npos;
    }
    EXPECT_EQ(numeric, 1u);
    EXPECT_TRUE(both_readings);
    EXPECT_EQ(to_json(c).size(), c.size());
}
