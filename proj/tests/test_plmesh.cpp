#include "knotspan/plmesh.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace knotspan;
using namespace knotspan::plmesh;

namespace {

PolygonalCurve figure_eight() {
    PolygonalCurve c;
    c.vertices = {{-1, -1, 0}, {1, 1, 0.4}, {1.2, 0, 0.4}, {1, -1, 0}, {-1, 1, 0}, {-1.2, 0, 0}};
    return c;
}

PolygonalCurve regular_polygon(std::size_t n, double radius = 1.0) {
    PolygonalCurve c;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = 2 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        c.vertices.emplace_back(radius * std::cos(phi), radius * std::sin(phi), 0.0);
    }
    return c;
}

// Independent crossing count: strict sign changes of the orientation tests.
std::size_t brute_crossings(const PolygonalCurve& c, const Eigen::Matrix3d& r) {
    const std::size_t n = c.vertices.size();
    std::vector<Point2> q;
    for (const auto& v : c.vertices) {
        const Point3 w = r * v;
        q.emplace_back(w.x(), w.y());
    }
    auto side = [](const Point2& a, const Point2& b, const Point2& p) {
        return (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
    };
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j <= i || j == i + 1 || (j + 1) % n == i) continue;
            const Point2 &a = q[i], &b = q[(i + 1) % n], &p = q[j], &s = q[(j + 1) % n];
            if (side(a, b, p) * side(a, b, s) < 0 && side(p, s, a) * side(p, s, b) < 0) ++count;
        }
    }
    return count;
}

}  // namespace

TEST(Projection, PlanarConvexUsesIdentity) {
    const auto f = find_regular_projection(normalize(regular_polygon(7)).curve, 1);
    EXPECT_EQ(f.trial, 0u);
    const auto pg = build_projection_graph(normalize(regular_polygon(7)).curve, f.rotation);
    EXPECT_TRUE(pg.crossings.empty());
    EXPECT_EQ(pg.fragments.size(), 7u);
}

TEST(Projection, VerticalEdgeRejectsIdentity) {
    PolygonalCurve c;
    c.vertices = {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 0}};
    std::string why;
    EXPECT_FALSE(is_regular(normalize(c).curve, Eigen::Matrix3d::Identity(), 1e-7, &why));
    EXPECT_NE(why.find("vertical"), std::string::npos);
    const auto f = find_regular_projection(normalize(c).curve, 3);
    EXPECT_GT(f.trial, 0u);
    EXPECT_TRUE(is_regular(normalize(c).curve, f.rotation, 1e-7));
}

TEST(Projection, FigureEightOverUnder) {
    const auto unit = normalize(figure_eight()).curve;
    const auto pg = build_projection_graph(unit, Eigen::Matrix3d::Identity());
    ASSERT_EQ(pg.crossings.size(), 1u);
    EXPECT_EQ(pg.crossings[0].over_edge, 0u);
    EXPECT_EQ(pg.crossings[0].under_edge, 3u);
    EXPECT_GT(pg.crossings[0].z_over, pg.crossings[0].z_under);
    EXPECT_NEAR(pg.crossings[0].over_param, 0.5, 1e-12);
    EXPECT_EQ(pg.fragments.size(), 8u);
}

TEST(Projection, CrossingsMatchBruteForce) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        // Crumpled but embedded: random unknot with larger height noise.
        auto c = random_unknot(12, seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.4, 0.4);
        for (auto& v : c.vertices) v += Point3(u(rng), u(rng), u(rng));
        if (!curves::is_embedded(c)) continue;
        const auto unit = normalize(c).curve;
        const auto f = find_regular_projection(unit, seed);
        const auto pg = build_projection_graph(unit, f.rotation);
        EXPECT_EQ(pg.crossings.size(), brute_crossings(unit, f.rotation)) << seed;
        EXPECT_LT(pg.crossings.size(), 12u * 12u);
    }
}

TEST(Augment, TriangleCountsAndEuler) {
    const auto unit = normalize(regular_polygon(3)).curve;
    const auto g = augment_graph(build_projection_graph(unit, Eigen::Matrix3d::Identity()));
    const std::size_t n = 3;
    EXPECT_LE(g.triangles.size(), 10 * n * n + 10 * n + 4);
    EXPECT_LE(g.vertices.size(), 5 * n * n + 5 * n + 3);
    const long v = static_cast<long>(g.vertices.size()), e = static_cast<long>(g.edges.size());
    const long f = static_cast<long>(g.triangles.size()) + 1;
    EXPECT_EQ(v - e + f, 2);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(g.vertices[g.vertices.size() - 1 - k].norm(), 3.0, 1e-12);
}

TEST(Augment, FigureEightDiamond) {
    const auto unit = normalize(figure_eight()).curve;
    const auto g = augment_graph(build_projection_graph(unit, Eigen::Matrix3d::Identity()));
    const std::size_t x = 6;
    ASSERT_EQ(g.kind[x], VertexKind::Crossing);
    int around = 0;
    for (const auto& t : g.triangles) {
        if (std::find(t.begin(), t.end(), x) == t.end()) continue;
        ++around;
        for (auto w : t) {
            if (w != x) {
                EXPECT_EQ(g.kind[w], VertexKind::Special);
            }
        }
    }
    EXPECT_EQ(around, 4);
    for (const auto& t : g.triangles) {
        EXPECT_GT(geom::orient2d(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]]), 0.0);
    }
    const long f = static_cast<long>(g.triangles.size()) + 1;
    EXPECT_EQ(static_cast<long>(g.vertices.size()) - static_cast<long>(g.edges.size()) + f, 2);
}

TEST(Ball, TriangleWithinBound) {
    const auto p = regular_polygon(3, 0.7);
    const auto b = build_ball_triangulation(p);
    EXPECT_LT(b.tets.size(), 3596u);
    EXPECT_EQ(b.tets.size(), 28 * b.graph_triangles + 4 * b.crossings);
    const auto r = validate_tetmesh(b, p);
    EXPECT_TRUE(r.ok()) << r.first_failure;
    const double L = curves::length(p);
    EXPECT_NEAR(r.tet_volume, 2 * (27 * std::sqrt(3.0) / 4) * L * L * L, 1e-9 * L * L * L);
}

TEST(Ball, SquareEdgesBySkeletonScan) {
    PolygonalCurve p;
    p.vertices = {{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}};
    const auto b = build_ball_triangulation(p);
    ASSERT_EQ(b.crossings, 0u);
    auto find_vertex = [&](const Point3& x) {
        for (std::size_t v = 0; v < b.vertices.size(); ++v) {
            if ((b.vertices[v] - x).norm() <= 1e-12) return static_cast<long>(v);
        }
        return -1L;
    };
    auto in_some_tet = [&](std::size_t u, std::size_t w) {
        for (const auto& t : b.tets) {
            if (std::find(t.begin(), t.end(), u) != t.end() && std::find(t.begin(), t.end(), w) != t.end()) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t e = 0; e < 4; ++e) {
        const Point3 a = p.vertices[e], c = p.vertices[(e + 1) % 4];
        std::vector<long> chain;
        for (int k = 0; k <= 3; ++k) chain.push_back(find_vertex(a + (c - a) * (k / 3.0)));
        for (auto v : chain) ASSERT_GE(v, 0);
        EXPECT_EQ(b.vertices[static_cast<std::size_t>(chain[0])], a);
        for (int k = 0; k < 3; ++k) {
            EXPECT_TRUE(in_some_tet(static_cast<std::size_t>(chain[k]), static_cast<std::size_t>(chain[k + 1])));
        }
    }
    EXPECT_TRUE(validate_tetmesh(b, p).ok());
}

TEST(Ball, FigureEightPipeline) {
    const auto p = figure_eight();
    const auto b = build_ball_triangulation(p);
    EXPECT_EQ(b.crossings, 1u);
    const auto r = validate_tetmesh(b, p);
    EXPECT_TRUE(r.ok()) << r.first_failure;
    EXPECT_LE(r.max_radius, 4 * curves::length(p));
}

TEST(Ball, NegativeControls) {
    const auto p = random_unknot(6, 4);
    const auto b = build_ball_triangulation(p);
    ASSERT_TRUE(validate_tetmesh(b, p).ok());

    auto holed = b;
    holed.tets.erase(holed.tets.begin() + static_cast<std::ptrdiff_t>(holed.tets.size() / 2));
    const auto r1 = validate_tetmesh(holed, p);
    EXPECT_FALSE(r1.face_pairing);
    EXPECT_FALSE(r1.ok());

    auto moved = b;
    const double L = curves::length(p);
    std::size_t far = 0;
    for (std::size_t v = 0; v < moved.vertices.size(); ++v) {
        if ((moved.vertices[v] - b.center).norm() > (moved.vertices[far] - b.center).norm()) far = v;
    }
    moved.vertices[far] = b.center + (moved.vertices[far] - b.center).normalized() * 5 * L;
    const auto r2 = validate_tetmesh(moved, p);
    EXPECT_FALSE(r2.radius);
    EXPECT_FALSE(r2.ok());

    auto flipped = b;
    std::swap(flipped.tets[0][2], flipped.tets[0][3]);
    EXPECT_FALSE(validate_tetmesh(flipped, p).orientation);
}

TEST(Ball, RandomUnknotsSample) {
    for (std::size_t n : {3u, 5u, 9u, 15u}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const auto p = random_unknot(n, 1000 * n + seed);
            ASSERT_TRUE(curves::is_embedded(p));
            const auto b = build_ball_triangulation(p, seed + 1);
            const auto r = validate_tetmesh(b, p);
            EXPECT_TRUE(r.ok()) << n << ' ' << seed << ' ' << r.first_failure;
            EXPECT_LT(r.tets, tet_count_bound(n));
        }
    }
}

TEST(Ball, DeterministicAndExport) {
    const auto p = random_unknot(7, 11);
    const auto a = build_ball_triangulation(p, 5), b = build_ball_triangulation(p, 5);
    EXPECT_EQ(a.tets, b.tets);
    EXPECT_EQ(a.vertices, b.vertices);
    std::ostringstream out;
    write_tet(a, out);
    std::istringstream in(out.str());
    std::string magic;
    std::size_t nv = 0, nt = 0;
    in >> magic >> nv >> nt;
    EXPECT_EQ(magic, "tet");
    EXPECT_EQ(nv, a.vertices.size());
    EXPECT_EQ(nt, a.tets.size());
    const auto surf = boundary_surface(a);
    EXPECT_TRUE(mesh::boundary_loops(surf).empty());
}

TEST(Ball, CrumpledPolygonsWithCrossings) {
    std::size_t with_crossings = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const std::size_t n = 3 + seed % 13;
        auto c = random_unknot(n, seed);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        for (auto& v : c.vertices) v += Point3(u(rng), u(rng), u(rng));
        if (!curves::is_embedded(c)) continue;
        const auto b = build_ball_triangulation(c, seed);
        const auto r = validate_tetmesh(b, c);
        EXPECT_TRUE(r.ok()) << seed << ' ' << r.first_failure;
        EXPECT_NEAR(r.tet_volume, r.hull_volume, 1e-9 * r.hull_volume);
        if (b.crossings > 0) ++with_crossings;
    }
    EXPECT_GT(with_crossings, 20u);
}
