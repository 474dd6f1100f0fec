#include "knotspan/deform.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace knotspan;
using namespace knotspan::deform;

namespace {

struct CircleSetup {
    inscribe::InscribedPolygon ip;
    std::vector<Cone> cones;
    NecklaceMap nm;
};

const CircleSetup& circle_setup() {
    static const CircleSetup s = [] {
        CircleSetup c;
        c.ip = inscribe::inscribe_polygon(curves::make_circle(1.0, 202 * 16), 1.0);
        c.cones = inscribe::build_cone_necklace(c.ip);
        c.nm = build_necklace_map(c.ip, c.cones);
        return c;
    }();
    return s;
}

Cone upright_cone(double b, double h) { return {{0, 0, 0}, {0, 0, 1}, h, std::atan(b), {0, 0, h}}; }

}  // namespace

TEST(Sigma, Examples) {
    const RadialDiskMap m{{0.3, -0.2}, 1.0};
    const Point2 rim(std::cos(0.7), std::sin(0.7));
    EXPECT_NEAR((sigma_apply(m, rim) - rim).norm(), 0.0, 1e-15);
    EXPECT_NEAR((sigma_apply(m, Point2::Zero()) - m.q).norm(), 0.0, 1e-15);
    const RadialDiskMap id{Point2::Zero(), 2.0};
    EXPECT_EQ(sigma_apply(id, Point2(0.5, 1.0)), Point2(0.5, 1.0));
    EXPECT_THROW(sigma_apply(m, Point2(1.1, 0)), InputError);
    EXPECT_THROW((RadialDiskMap{{1.0, 0.0}, 1.0}).validate(), InputError);
}

TEST(Sigma, RoundTrip) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    const RadialDiskMap m{{0.45, 0.3}, 0.9};
    for (int k = 0; k < 10000; ++k) {
        Point2 w(u(rng), u(rng));
        if (w.norm() > 0.9) continue;
        EXPECT_NEAR((sigma_inverse(m, sigma_apply(m, w)) - w).norm(), 0.0, 1e-9 * m.d);
    }
}

TEST(Sigma, LipschitzBounds) {
    const auto id = sigma_lipschitz_check({Point2::Zero(), 1.0}, 10000, 3);
    EXPECT_DOUBLE_EQ(id.bound, 1.0);
    EXPECT_LE(id.empirical, 1.0 + 1e-9);
    EXPECT_TRUE(id.ok());

    const auto half = sigma_lipschitz_check({{0.5, 0.0}, 1.0}, 100000, 4);
    EXPECT_DOUBLE_EQ(half.bound, 1.5);
    EXPECT_DOUBLE_EQ(half.inverse_bound, 2.0);
    EXPECT_TRUE(half.ok());
    // The sampling gets close to both bounds, otherwise the check is vacuous.
    EXPECT_GT(half.empirical, 1.3);
    EXPECT_GT(half.inverse_empirical, 1.5);
    EXPECT_TRUE(half.displacement_ok);
}

TEST(ConeMapTest, AxisDriverIsIdentity) {
    const auto m = ConeMap::axis(upright_cone(0.14, 1.0));
    const auto rep = cone_lipschitz_check(m, 20000, 5);
    EXPECT_LE(rep.empirical, 1.0 + 1e-6);
    EXPECT_NEAR(rep.lemma_bound, 4 * std::sqrt(1 + 0.14 * 0.14) + 3, 1e-12);
    EXPECT_NEAR((cone_map_apply(m, {0.05, 0.02, 0.6}) - Point3(0.05, 0.02, 0.6)).norm(), 0.0, 1e-15);
}

TEST(ConeMapTest, HelicalDriver) {
    const double b = 0.14;
    const Cone c = upright_cone(b, 1.0);
    std::vector<Point3> pts;
    for (int i = 0; i <= 400; ++i) {
        const double t = i / 400.0;
        const double rho = 0.1 * t * (1 - t);
        pts.emplace_back(rho * std::cos(6 * M_PI * t), rho * std::sin(6 * M_PI * t), t);
    }
    const auto m = ConeMap::from_arc(c, curves::SampledCurve::from_points(pts, false));
    EXPECT_LE(m.lipschitz_driver, 2.0);
    // Axis point (0, 0, t) goes to alpha(t).
    for (int i = 1; i < 400; i += 37) {
        const double t = i / 400.0;
        EXPECT_NEAR((cone_map_apply(m, {0, 0, t}) - pts[i]).norm(), 0.0, 1e-12);
    }
    // Lateral boundary fixed.
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 10000; ++k) {
        const double t = u(rng), phi = 2 * M_PI * u(rng);
        const Point3 p(b * t * std::cos(phi), b * t * std::sin(phi), t);
        EXPECT_LE((cone_map_apply(m, p) - p).norm(), 1e-9);
    }
    const auto rep = cone_lipschitz_check(m, 100000, 7);
    EXPECT_TRUE(rep.ok());
    EXPECT_LT(rep.empirical, rep.lemma_bound);
}

TEST(ConeMapTest, OutsidePointRejected) {
    const auto m = ConeMap::axis(upright_cone(0.1, 1.0));
    EXPECT_THROW(cone_map_apply(m, {0.5, 0, 0.5}), InputError);
    EXPECT_THROW(cone_map_apply(m, {0, 0, 1.5}), InputError);
}

TEST(Necklace, GluingConsistency) {
    const auto& s = circle_setup();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    const double eps = 1e-9;
    for (std::size_t j = 0; j < s.nm.maps.size(); j += 7) {
        const auto& cm = s.nm.maps[j];
        for (int k = 0; k < 200; ++k) {
            const double t = cm.cone.h * (0.01 + 0.98 * u(rng)), phi = 2 * M_PI * u(rng);
            const double rho = cm.cone.b() * t - 0.5 * eps;
            const Point3 p = cm.to_world({rho * std::cos(phi), rho * std::sin(phi)}, t);
            EXPECT_LE((cone_map_apply(cm, p) - p).norm(), 10 * eps);
        }
    }
}

TEST(Necklace, CircleDriversWithinLemmaBound) {
    const auto& s = circle_setup();
    for (std::size_t j = 0; j < s.nm.maps.size(); j += 20) {
        const auto rep = cone_lipschitz_check(s.nm.maps[j], 100000, 100 + j);
        EXPECT_TRUE(rep.ok()) << j;
        EXPECT_LE(rep.c_l, 2.0);
    }
}

TEST(Necklace, FlatDiskPipeline) {
    const auto& s = circle_setup();
    const auto flat = flat_necklace_mesh(s.ip, s.cones);
    const double polygon_area = 0.5 * 202 * std::sin(2 * M_PI / 202);
    EXPECT_NEAR(flat.area(), polygon_area, 1e-12);
    const auto [out, rep] = necklace_map_mesh(s.nm, flat, s.ip.base);
    EXPECT_EQ(rep.refinement_rounds, 0u);
    EXPECT_LE(rep.ratio, 25.0);
    EXPECT_LE(rep.max_boundary_residual, 1e-9);
    EXPECT_LE(rep.ratio, rep.empirical_lipschitz * rep.empirical_lipschitz * (1 + 1e-6));
    // The image fills the chord segments towards the circle.
    EXPECT_LT(std::abs(rep.area_out - M_PI), std::abs(rep.area_in - M_PI));
    for (const auto& v : out.vertices) EXPECT_LE(v.norm(), 1.0 + 1e-9);
}

TEST(Necklace, OutsideMeshUnchanged) {
    const auto& s = circle_setup();
    TriMesh m;
    m.vertices = {{-0.3, -0.3, 0}, {0.3, -0.3, 0}, {0.3, 0.3, 0}, {-0.3, 0.3, 0}};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    const auto [out, rep] = necklace_map_mesh(s.nm, m, s.ip.base);
    EXPECT_EQ(out.vertices, m.vertices);
    EXPECT_DOUBLE_EQ(rep.ratio, 1.0);
}

TEST(Necklace, StraddlingFanExhaustsBudget) {
    const auto& s = circle_setup();
    TriMesh fan;
    fan.vertices = s.ip.vertices;
    fan.vertices.push_back(Point3::Zero());
    for (std::size_t j = 0; j < s.ip.n; ++j) fan.faces.push_back({s.ip.n, j, (j + 1) % s.ip.n});
    EXPECT_THROW(necklace_map_mesh(s.nm, fan, s.ip.base), Error);
}

TEST(Off, RoundTrip) {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0.5}};
    m.faces = {{0, 1, 2}};
    std::stringstream ss;
    mesh::write_off(m, ss);
    const auto back = mesh::parse_off(ss);
    EXPECT_EQ(back.vertices, m.vertices);
    EXPECT_EQ(back.faces, m.faces);
    std::stringstream bad("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
    EXPECT_THROW(mesh::parse_off(bad), InputError);
}
