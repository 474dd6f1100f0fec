#include "knotspan/disks.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <random>

using namespace knotspan;
using namespace knotspan::disks;

namespace {

TriMesh torus_with_hole(std::size_t nu, std::size_t nv) {
    TriMesh m;
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double u = 2 * M_PI * i / nu, v = 2 * M_PI * j / nv;
            m.vertices.emplace_back((2 + std::cos(v)) * std::cos(u), (2 + std::cos(v)) * std::sin(u), std::sin(v));
        }
    }
    auto id = [&](std::size_t i, std::size_t j) { return (i % nu) * nv + (j % nv); };
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            if (i == 0 && j == 0) continue;  // the hole
            m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return m;
}

// Lines parallel to y pierce a triangle iff (x, z) lies inside its xz-shadow.
std::size_t shadow_count(const TriMesh& m, double x, double z, bool* near_edge) {
    std::size_t c = 0;
    *near_edge = false;
    const Point2 p(x, z);
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        const auto t = m.triangle(f);
        const Point2 a(t[0].x(), t[0].z()), b(t[1].x(), t[1].z()), cc(t[2].x(), t[2].z());
        if (std::abs(geom::orient2d(a, b, cc)) < 1e-14) continue;
        const double d = std::min({geom::point_segment_distance_2d(p, a, b), geom::point_segment_distance_2d(p, b, cc),
                                   geom::point_segment_distance_2d(p, cc, a)});
        if (d < 1e-6) *near_edge = true;
        c += geom::point_in_triangle_2d(p, a, b, cc, 0.0);
    }
    return c;
}

Eigen::Matrix3d some_rotation() {
    return Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
}

}  // namespace

TEST(CheckDisk, FlatDiskPasses) {
    auto sd = make_disk(polar_disk(1.0, 6));
    curves::PolygonalCurve target;
    for (auto v : sd.boundary) target.vertices.push_back(sd.mesh.vertices[v]);
    sd.target = target;
    const auto r = check_disk(sd);
    EXPECT_TRUE(r.ok()) << to_json(r).dump();
    EXPECT_EQ(r.euler_characteristic, 1);
    EXPECT_EQ(r.boundary_components, 1u);
}

TEST(CheckDisk, NegativeControls) {
    auto flipped = polar_disk(1.0, 4);
    std::swap(flipped.faces[3][0], flipped.faces[3][1]);
    std::swap(flipped.faces[20][1], flipped.faces[20][2]);
    const auto r1 = check_disk(make_disk(flipped));
    EXPECT_FALSE(r1.orientable);
    EXPECT_TRUE(r1.euler);

    const auto r2 = check_disk(make_disk(torus_with_hole(12, 8)));
    EXPECT_EQ(r2.euler_characteristic, -1);
    EXPECT_FALSE(r2.euler);
    EXPECT_TRUE(r2.orientable);
    EXPECT_TRUE(r2.single_boundary);

    auto pierced = polar_disk(1.0, 4);
    const auto base = pierced.vertices.size();
    pierced.vertices.emplace_back(0.1, 0.1, -0.5);
    pierced.vertices.emplace_back(0.15, 0.1, 0.5);
    pierced.vertices.emplace_back(0.1, 0.15, 0.5);
    pierced.faces.push_back({base, base + 1, base + 2});
    const auto r3 = check_disk(make_disk(pierced));
    EXPECT_FALSE(r3.embedded);
    EXPECT_FALSE(r3.connected);

    auto sd = make_disk(polar_disk(1.0, 4));
    curves::PolygonalCurve far;
    far.vertices = {{0, 0, 5}, {1, 0, 5}, {0, 1, 5}};
    sd.target = far;
    EXPECT_FALSE(check_disk(sd).boundary_on_target);
}

TEST(Area, Basics) {
    EXPECT_NEAR(mesh_area(make_disk(polar_disk(1.0, 40))), M_PI, 0.005 * M_PI);
    TriMesh sq;
    sq.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    sq.faces = {{0, 1, 2}, {0, 2, 3}};
    EXPECT_NEAR(mesh_area(make_disk(sq)), 1.0, 1e-15);
    auto w = wavy_disk(1.0, 0.3, 10);
    const double a = w.area();
    for (auto& p : w.vertices) p = some_rotation() * p + Vec3(3, -1, 2);
    EXPECT_NEAR(w.area(), a, 1e-12 * a);
}

TEST(LineCount, FlatDiskAndTranslate) {
    const auto m = polar_disk(1.0, 6);
    const auto c = line_intersection_count(m, {Point3(0, 0, 0), Vec3(0, 0, 1)}, 7);
    EXPECT_EQ(c.count, 1u);
    EXPECT_GE(c.jitters, 1u);  // the axis meets the centre vertex
    EXPECT_LE((c.used_point - Point3(0, 0, 0)).norm(), 10 * Tolerance{}.eps_len);
    const auto again = line_intersection_count(m, {Point3(0, 0, 0), Vec3(0, 0, 1)}, 7);
    EXPECT_EQ(again.used_point, c.used_point);
    auto moved = m;
    for (auto& p : moved.vertices) p += Vec3(5, 0, 0);
    EXPECT_EQ(line_intersection_count(moved, {Point3(0, 0, 0), Vec3(0, 0, 1)}).count, 0u);
}

TEST(LineCount, AccordionMatchesShadowOracle) {
    const auto m = folded_sheet(3, 0.05);
    EXPECT_EQ(line_intersection_count(m, {Point3(0, 0, 0), Vec3(0, 1, 0)}).count, 3u);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        const double x = u(rng), z = u(rng);
        bool near = false;
        const auto expect = shadow_count(m, x, z, &near);
        if (near) continue;
        ++compared;
        EXPECT_EQ(line_intersection_count(m, {Point3(x, 7, z), Vec3(0, 1, 0)}).count, expect) << x << " " << z;
    }
    EXPECT_GT(compared, 200);
}

TEST(LineCount, ClosedSurfaceParity) {
    // Flat unit disk capped by a hemisphere sharing its boundary.
    TriMesh closed = polar_disk(1.0, 8);
    TriMesh cap = polar_disk(1.0, 8);
    const std::size_t off = closed.vertices.size();
    for (auto p : cap.vertices) {
        p.z() = std::sqrt(std::max(0.0, 1.0 - p.x() * p.x() - p.y() * p.y()));
        closed.vertices.push_back(p);
    }
    for (auto f : cap.faces) closed.faces.push_back({f[0] + off, f[2] + off, f[1] + off});
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 200; ++i) {
        const Point3 p(u(rng), u(rng), 0.3 + 0.3 * u(rng));
        const Vec3 d(g(rng), g(rng), g(rng));
        const auto c = line_intersection_count(closed, {p, d}, static_cast<std::uint64_t>(i));
        EXPECT_EQ(c.count % 2, 0u);
        EXPECT_GE(c.count, 2u);
    }
}

TEST(LineCount, UnachievableTransversality) {
    // Every point of this disk lies within eps_len of an edge, also after jitter.
    Tolerance coarse;
    coarse.eps_len = 1.0;
    EXPECT_THROW(line_intersection_count(polar_disk(100.0, 100), {Point3(0.1, 0.1, 0), Vec3(0, 0, 1)}, 0, coarse),
                 Error);
}

TEST(Certificate, RectDiskAreaOracle) {
    const double r = 0.7;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 40; ++i) {
        double x0 = u(rng), x1 = u(rng), z0 = u(rng), z1 = u(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (z0 > z1) std::swap(z0, z1);
        // Midpoint rule on the exact vertical chord length.
        const int steps = 200000;
        double num = 0;
        for (int k = 0; k < steps; ++k) {
            const double x = x0 + (x1 - x0) * (k + 0.5) / steps;
            const double s = std::sqrt(std::max(0.0, r * r - x * x));
            num += std::max(0.0, std::min(z1, s) - std::max(z0, -s));
        }
        num *= (x1 - x0) / steps;
        EXPECT_NEAR(rect_disk_area(x0, x1, z0, z1, r), num, 1e-8);
    }
    double total = 0;
    const int n = 37;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            total += rect_disk_area(-r + 2 * r * i / n, -r + 2 * r * (i + 1) / n, -r + 2 * r * k / n,
                                    -r + 2 * r * (k + 1) / n, r);
        }
    }
    EXPECT_NEAR(total, M_PI * r * r, 1e-12);
}

TEST(Certificate, OneAndTwoFold) {
    const double r0 = 0.01, target = M_PI * r0 * r0;
    for (std::size_t folds : {1, 2, 3}) {
        const auto sd = make_disk(folded_sheet(folds, 0.05));
        ASSERT_FALSE(sd.boundary.empty());
        const auto c = cylinder_area_certificate(sd, r0, 1);
        const double exact = static_cast<double>(folds) * target;
        EXPECT_NEAR(c.certified_lower_bound, exact, 0.05 * exact) << folds;
        // Both grids are exact up to summation rounding here.
        EXPECT_LE(std::abs(c.refined_bound - exact), std::abs(c.certified_lower_bound - exact) + 1e-10 * exact);
        EXPECT_TRUE(c.sound);
        EXPECT_GE(c.mesh_area, 0.95 * c.certified_lower_bound);
        EXPECT_EQ(c.min_multiplicity, folds);
        EXPECT_EQ(c.max_multiplicity, folds);
        EXPECT_NEAR(c.c7_reference, M_PI * 1e-4, 1e-15);
    }
}

TEST(Certificate, FoldInsideCrossSectionRefines) {
    // Two layers for x below the fold tip, none beyond it.
    const double r0 = 0.01, gap = 0.004, fold_x = 0.00313;  // tip off both grids
    const auto sd = make_disk(folded_sheet(2, gap, fold_x, 400));
    const auto c = cylinder_area_certificate(sd, r0, 2);
    const double exact = 2.0 * rect_disk_area(-r0, fold_x + gap / 2, -r0, r0, r0);
    EXPECT_NEAR(c.certified_lower_bound, exact, 0.05 * exact);
    EXPECT_LT(std::abs(c.refined_bound - exact), std::abs(c.certified_lower_bound - exact));
    EXPECT_EQ(c.min_multiplicity, 0u);
    EXPECT_EQ(c.max_multiplicity, 2u);
    EXPECT_TRUE(c.sound);
}

TEST(Certificate, BoundaryInsideCylinderRejected) {
    EXPECT_THROW(cylinder_area_certificate(make_disk(polar_disk(1.0, 4)), 0.01, 1), Error);
    EXPECT_THROW(cylinder_area_certificate(make_disk(folded_sheet(1, 0.05)), 0.01, 1, 128), InputError);
}

TEST(Gradient, MatchesCentralDifferences) {
    auto m = wavy_disk(1.0, 0.3, 10);
    const auto g = area_gradient(m);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, m.vertices.size() - 1);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const auto v = pick(rng);
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            const Point3 keep = m.vertices[v];
            m.vertices[v][k] += h;
            const double ap = m.area();
            m.vertices[v] = keep;
            m.vertices[v][k] -= h;
            const double am = m.area();
            m.vertices[v] = keep;
            fd[k] = (ap - am) / (2 * h);
        }
        EXPECT_LE((fd - g[v]).norm(), 1e-6 * std::max(g[v].norm(), 1e-3)) << v;
    }
}

TEST(Minimize, WavyDiskReachesFlat) {
    const auto sd = make_disk(wavy_disk(1.0, 0.3, 12));
    const auto res = minimize_area(sd, 2000);
    const double a = res.area_log.back();
    EXPECT_GT(res.area_log.front(), 1.1 * M_PI);
    EXPECT_NEAR(a, M_PI, 0.02 * M_PI);
    const double ratio = isoperimetric_ratio(res.disk);
    EXPECT_GE(ratio, 0.98);
    EXPECT_LE(ratio, 1.02);
    for (std::size_t i = 1; i < res.area_log.size(); ++i) EXPECT_LE(res.area_log[i], res.area_log[i - 1]);
    for (auto v : sd.boundary) EXPECT_EQ(res.disk.mesh.vertices[v], sd.mesh.vertices[v]);
    EXPECT_GE(min_angle_deg(res.disk.mesh), 1.0);
    EXPECT_TRUE(check_disk(res.disk).embedded);
}

TEST(Minimize, FlatIsStationary) {
    const auto sd = make_disk(polar_disk(1.0, 8));
    const auto res = minimize_area(sd, 50);
    EXPECT_LE(std::abs(res.area_log.back() - res.area_log.front()), 1e-6 * res.area_log.front());
}

TEST(Minimize, ConeDecreasesStrictly) {
    const auto res = minimize_area(make_disk(cone_disk(1.0, 1.0, 8)), 40);
    ASSERT_GE(res.area_log.size(), 20u);
    for (std::size_t i = 1; i < res.area_log.size(); ++i) EXPECT_LT(res.area_log[i], res.area_log[i - 1]);
}

TEST(Minimize, AngleFloorRejected) {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1e-4, 0}};
    m.faces = {{0, 1, 2}};
    EXPECT_THROW(minimize_area(make_disk(m), 10), Error);
}

TEST(Isoperimetric, RatiosAndInvariance) {
    const auto round = make_disk(polar_disk(1.0, 30));
    EXPECT_NEAR(isoperimetric_ratio(round), 1.0, 0.01);
    auto ell = polar_disk(1.0, 30);
    for (auto& p : ell.vertices) p.x() *= 2.0;
    EXPECT_LT(isoperimetric_ratio(make_disk(ell)), 1.0);
    auto w = wavy_disk(1.0, 0.3, 10);
    const double r = isoperimetric_ratio(make_disk(w));
    for (auto& p : w.vertices) p = 3.5 * (some_rotation() * p) + Vec3(1, 2, 3);
    EXPECT_NEAR(isoperimetric_ratio(make_disk(w)), r, 1e-9 * r);
}

TEST(Json, Reports) {
    const auto sd = make_disk(folded_sheet(2, 0.05));
    const auto j = to_json(cylinder_area_certificate(sd, 0.01, 2));
    EXPECT_TRUE(j["sound"].get<bool>());
    EXPECT_EQ(j["resolution"].get<int>(), 256);
    EXPECT_TRUE(to_json(check_disk(sd))["ok"].get<bool>());
}
