#include "knotspan/plmesh.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

namespace knotspan::plmesh {

namespace {

constexpr double kMargin = 1e-7;

Point2 xy(const Point3& p) { return {p.x(), p.y()}; }

std::vector<Point3> rotated(const PolygonalCurve& c, const Eigen::Matrix3d& r) {
    std::vector<Point3> out;
    out.reserve(c.vertices.size());
    for (const auto& v : c.vertices) out.push_back(r * v);
    return out;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    q.normalize();
    return q.toRotationMatrix();
}

struct RawCrossing {
    std::size_t e1, e2;
    double t1, t2;
    Point2 point;
};

// Proper crossings of non-adjacent projected edges, plus a reason when the
// projection is not regular.
std::vector<RawCrossing> projected_crossings(const std::vector<Point3>& q, double margin, std::string& why) {
    const std::size_t n = q.size();
    std::vector<RawCrossing> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = xy(q[i]), b = xy(q[(i + 1) % n]);
        if ((b - a).norm() <= margin) {
            why = "edge " + std::to_string(i) + " is nearly vertical";
            return {};
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t e = 0; e < n; ++e) {
            if (e == v || (e + 1) % n == v) continue;
            if (geom::point_segment_distance_2d(xy(q[v]), xy(q[e]), xy(q[(e + 1) % n])) <= margin) {
                why = "vertex " + std::to_string(v) + " projects onto edge " + std::to_string(e);
                return {};
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (j + 1) % n == i) continue;
            const Point2 a = xy(q[i]), b = xy(q[(i + 1) % n]);
            const Point2 c = xy(q[j]), d = xy(q[(j + 1) % n]);
            const Point2 d1 = b - a, d2 = d - c;
            const double den = geom::cross2(d1, d2);
            if (std::abs(den) <= 1e-300) continue;
            const double t = geom::cross2(c - a, d2) / den;
            const double u = geom::cross2(c - a, d1) / den;
            if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) continue;
            if (std::abs(den) / (d1.norm() * d2.norm()) <= margin) {
                why = "edges " + std::to_string(i) + " and " + std::to_string(j) + " cross tangentially";
                return {};
            }
            const double z1 = q[i].z() + t * (q[(i + 1) % n].z() - q[i].z());
            const double z2 = q[j].z() + u * (q[(j + 1) % n].z() - q[j].z());
            if (std::abs(z1 - z2) <= margin) {
                why = "edges " + std::to_string(i) + " and " + std::to_string(j) + " meet in space";
                return {};
            }
            out.push_back({i, j, t, u, a + t * d1});
        }
    }
    for (std::size_t a = 0; a < out.size(); ++a) {
        for (std::size_t b = a + 1; b < out.size(); ++b) {
            if ((out[a].point - out[b].point).norm() <= margin) {
                why = "near triple point";
                return {};
            }
        }
    }
    why.clear();
    return out;
}

}  // namespace

Normalized normalize(const PolygonalCurve& p) {
    p.validate();
    if (!p.closed) throw InputError("plmesh", "polygon must be closed");
    Normalized out;
    out.length = curves::length(p);
    Point3 lo = p.vertices.front(), hi = lo;
    for (const auto& v : p.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    out.center = 0.5 * (lo + hi);
    out.curve = curves::transformed(p, Eigen::Matrix3d::Identity(), -out.center / out.length, 1.0 / out.length);
    return out;
}

bool is_regular(const PolygonalCurve& unit, const Eigen::Matrix3d& rotation, double margin, std::string* why) {
    std::string reason;
    projected_crossings(rotated(unit, rotation), margin, reason);
    if (why) *why = reason;
    return reason.empty();
}

Frame find_regular_projection(const PolygonalCurve& p, std::uint64_t seed, std::size_t max_trials,
                              std::size_t first_trial) {
    std::mt19937_64 rng(seed);
    Frame f;
    std::string why;
    for (std::size_t trial = 0; trial < max_trials; ++trial) {
        const Eigen::Matrix3d r = trial == 0 ? Eigen::Matrix3d::Identity() : random_rotation(rng);
        if (trial < first_trial) continue;
        if (is_regular(p, r, kMargin, &why)) {
            f.rotation = r;
            f.trial = trial;
            return f;
        }
    }
    throw Error("plmesh", "no regular projection after " + std::to_string(max_trials) + " frames (" + why + ")");
}

ProjectionGraph build_projection_graph(const PolygonalCurve& unit, const Eigen::Matrix3d& rotation,
                                       double margin) {
    const auto q = rotated(unit, rotation);
    std::string why;
    const auto raw = projected_crossings(q, margin, why);
    if (!why.empty()) throw Error("plmesh", "projection not regular: " + why);
    const std::size_t n = q.size();
    ProjectionGraph g;
    g.rotation = rotation;
    g.n = n;
    g.lifted = q;
    for (const auto& v : q) g.vertices.push_back(xy(v));

    // Per edge: (param, node) including both endpoints.
    std::vector<std::vector<std::pair<double, std::size_t>>> along(n);
    for (std::size_t e = 0; e < n; ++e) {
        along[e].push_back({0.0, e});
        along[e].push_back({1.0, (e + 1) % n});
    }
    for (const auto& c : raw) {
        const double z1 = q[c.e1].z() + c.t1 * (q[(c.e1 + 1) % n].z() - q[c.e1].z());
        const double z2 = q[c.e2].z() + c.t2 * (q[(c.e2 + 1) % n].z() - q[c.e2].z());
        const Crossing x = z1 > z2 ? Crossing{c.e1, c.e2, c.t1, c.t2, c.point, z1, z2}
                                   : Crossing{c.e2, c.e1, c.t2, c.t1, c.point, z2, z1};
        const std::size_t node = n + g.crossings.size();
        g.crossings.push_back(x);
        g.vertices.push_back(c.point);
        along[c.e1].push_back({c.t1, node});
        along[c.e2].push_back({c.t2, node});
    }
    for (std::size_t e = 0; e < n; ++e) {
        std::sort(along[e].begin(), along[e].end());
        for (std::size_t k = 0; k + 1 < along[e].size(); ++k) {
            g.fragments.push_back({along[e][k].second, along[e][k + 1].second});
            g.fragment_edge.push_back(e);
        }
    }
    return g;
}

namespace {

struct BaseEdge {
    std::size_t a, b;
    double za, zb;
    std::size_t s1 = 0, s2 = 0;  // specials at 1/3 and 2/3
};

double height_on_edge(const ProjectionGraph& pg, std::size_t node, std::size_t edge) {
    if (node < pg.n) return pg.lifted[node].z();
    const auto& c = pg.crossings[node - pg.n];
    return c.over_edge == edge ? c.z_over : c.z_under;
}

double signed_area(const std::vector<Point2>& v, const std::vector<std::size_t>& ring) {
    double a = 0.0;
    for (std::size_t k = 0; k < ring.size(); ++k) a += geom::cross2(v[ring[k]], v[ring[(k + 1) % ring.size()]]);
    return 0.5 * a;
}

// Faces of a plane graph by half-edge tracing; each ring keeps its face on
// the left.
std::vector<std::vector<std::size_t>> trace_faces(const std::vector<Point2>& v,
                                                  const std::vector<std::array<std::size_t, 2>>& edges) {
    std::vector<std::vector<std::size_t>> adj(v.size());
    for (const auto& e : edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    for (std::size_t u = 0; u < v.size(); ++u) {
        auto angle = [&](std::size_t w) { return std::atan2(v[w].y() - v[u].y(), v[w].x() - v[u].x()); };
        std::sort(adj[u].begin(), adj[u].end(), [&](std::size_t a, std::size_t b) { return angle(a) < angle(b); });
    }
    std::set<std::pair<std::size_t, std::size_t>> used;
    std::vector<std::vector<std::size_t>> faces;
    for (std::size_t u0 = 0; u0 < v.size(); ++u0) {
        for (std::size_t v0 : adj[u0]) {
            if (used.count({u0, v0})) continue;
            std::vector<std::size_t> ring;
            std::size_t a = u0, b = v0;
            while (used.insert({a, b}).second) {
                ring.push_back(a);
                const auto& nb = adj[b];
                const auto pos = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), a) - nb.begin());
                const std::size_t c = nb[(pos + nb.size() - 1) % nb.size()];
                a = b;
                b = c;
            }
            if (a != u0 || b != v0) throw Error("plmesh", "face tracing did not close");
            faces.push_back(std::move(ring));
        }
    }
    return faces;
}

}  // namespace

AugmentedGraph augment_graph(const ProjectionGraph& pg) {
    const std::size_t n = pg.n;
    AugmentedGraph g;
    g.vertices = pg.vertices;
    g.crossings = pg.crossings.size();
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        g.kind.push_back(i < n ? VertexKind::Polygon : VertexKind::Crossing);
        if (i < n) {
            g.z_upper.push_back(pg.lifted[i].z());
            g.z_lower.push_back(pg.lifted[i].z());
        } else {
            g.z_upper.push_back(pg.crossings[i - n].z_over);
            g.z_lower.push_back(pg.crossings[i - n].z_under);
        }
    }

    // Hull of the projected polygon; no other node may touch a hull edge.
    const std::vector<Point2> poly(pg.vertices.begin(), pg.vertices.begin() + static_cast<std::ptrdiff_t>(n));
    const auto hull = geom::convex_hull_2d_indices(poly);
    g.hull_size = hull.size();
    std::set<std::pair<std::size_t, std::size_t>> fragment_set;
    for (const auto& f : pg.fragments) fragment_set.insert({std::min(f.first, f.second), std::max(f.first, f.second)});
    std::vector<BaseEdge> base;
    for (std::size_t k = 0; k < pg.fragments.size(); ++k) {
        const auto [a, b] = pg.fragments[k];
        const std::size_t e = pg.fragment_edge[k];
        base.push_back({a, b, height_on_edge(pg, a, e), height_on_edge(pg, b, e)});
    }
    for (std::size_t k = 0; k < hull.size(); ++k) {
        const std::size_t a = hull[k], b = hull[(k + 1) % hull.size()];
        for (std::size_t w = 0; w < g.vertices.size(); ++w) {
            if (w == a || w == b) continue;
            if (geom::point_segment_distance_2d(g.vertices[w], g.vertices[a], g.vertices[b]) <= kMargin) {
                throw Error("plmesh", "node " + std::to_string(w) + " lies on a hull edge");
            }
        }
        if (!fragment_set.count({std::min(a, b), std::max(a, b)})) {
            base.push_back({a, b, pg.lifted[a].z(), pg.lifted[b].z()});
        }
    }

    // Specials and sub-edges.
    for (auto& e : base) {
        for (int k = 1; k <= 2; ++k) {
            const double t = k / 3.0;
            g.vertices.push_back((1 - t) * g.vertices[e.a] + t * g.vertices[e.b]);
            g.kind.push_back(VertexKind::Special);
            const double z = (1 - t) * e.za + t * e.zb;
            g.z_upper.push_back(z);
            g.z_lower.push_back(z);
            (k == 1 ? e.s1 : e.s2) = g.vertices.size() - 1;
        }
        g.edges.push_back({e.a, e.s1});
        g.edges.push_back({e.s1, e.s2});
        g.edges.push_back({e.s2, e.b});
    }

    // Diamonds around crossings.
    std::vector<std::array<std::size_t, 3>> diamond_tris;
    std::vector<std::array<std::size_t, 2>> diamond_edges;
    for (std::size_t c = 0; c < pg.crossings.size(); ++c) {
        const std::size_t x = n + c;
        std::vector<std::size_t> near;
        for (const auto& e : base) {
            if (e.a == x) near.push_back(e.s1);
            if (e.b == x) near.push_back(e.s2);
        }
        if (near.size() != 4) throw Error("plmesh", "crossing " + std::to_string(c) + " is not 4-valent");
        const Point2 o = g.vertices[x];
        std::sort(near.begin(), near.end(), [&](std::size_t a, std::size_t b) {
            return std::atan2(g.vertices[a].y() - o.y(), g.vertices[a].x() - o.x()) <
                   std::atan2(g.vertices[b].y() - o.y(), g.vertices[b].x() - o.x());
        });
        for (int k = 0; k < 4; ++k) {
            diamond_tris.push_back({x, near[k], near[(k + 1) % 4]});
            diamond_edges.push_back({near[k], near[(k + 1) % 4]});
        }
    }
    std::vector<std::array<std::size_t, 2>> all_edges = g.edges;
    all_edges.insert(all_edges.end(), diamond_edges.begin(), diamond_edges.end());
    for (const auto& t : diamond_tris) {
        if (geom::orient2d(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]]) <= 0.0) {
            throw Error("plmesh", "degenerate crossing diamond");
        }
        for (std::size_t w = 0; w < g.vertices.size(); ++w) {
            if (w == t[0] || w == t[1] || w == t[2]) continue;
            if (geom::point_in_triangle_2d(g.vertices[w], g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]],
                                           1e-12)) {
                throw Error("plmesh", "crossing diamond blocked by vertex " + std::to_string(w));
            }
        }
    }
    for (const auto& d : diamond_edges) {
        for (const auto& e : all_edges) {
            if (e[0] == d[0] || e[0] == d[1] || e[1] == d[0] || e[1] == d[1]) continue;
            if (geom::segments_intersect_2d(g.vertices[d[0]], g.vertices[d[1]], g.vertices[e[0]], g.vertices[e[1]],
                                            1e-12)) {
                throw Error("plmesh", "crossing diamond edge blocked");
            }
        }
    }
    g.edges = all_edges;

    // Faces inside the hull.
    const auto faces = trace_faces(g.vertices, g.edges);
    std::vector<std::size_t> outer;
    for (const auto& ring : faces) {
        if (std::set<std::size_t>(ring.begin(), ring.end()).size() != ring.size()) {
            throw Error("plmesh", "face boundary is not simple");
        }
        if (signed_area(g.vertices, ring) < 0.0) {
            if (!outer.empty()) throw Error("plmesh", "projection graph is disconnected");
            outer = ring;
            continue;
        }
        const bool is_diamond = ring.size() == 3 && std::any_of(ring.begin(), ring.end(), [&](std::size_t w) {
                                    return g.kind[w] == VertexKind::Crossing;
                                });
        auto start = std::min_element(ring.begin(), ring.end());
        std::vector<std::size_t> r(start, ring.end());
        r.insert(r.end(), ring.begin(), start);
        std::vector<Point2> pts;
        for (auto w : r) pts.push_back(g.vertices[w]);
        for (const auto& t : geom::triangulate_polygon(pts, 1e-12)) {
            g.triangles.push_back({r[t[0]], r[t[1]], r[t[2]]});
            g.crossing_triangle.push_back(is_diamond);
        }
    }
    if (outer.empty()) throw Error("plmesh", "no outer face");
    std::reverse(outer.begin(), outer.end());
    double hull_area = 0.0;
    {
        std::vector<std::size_t> h(hull.begin(), hull.end());
        hull_area = signed_area(g.vertices, h);
    }
    double inner_area = 0.0;
    for (const auto& t : g.triangles) inner_area += 0.5 * geom::orient2d(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]]);
    if (std::abs(signed_area(g.vertices, outer) - hull_area) > 1e-9 * std::max(hull_area, 1e-12) ||
        std::abs(inner_area - hull_area) > 1e-9 * std::max(hull_area, 1e-12)) {
        throw Error("plmesh", "hull faces do not tile the hull");
    }

    // Outer triangle and annulus.
    const std::size_t o0 = g.vertices.size();
    for (int k = 0; k < 3; ++k) {
        const double phi = M_PI / 2 + 2 * M_PI * k / 3;
        g.vertices.emplace_back(3 * std::cos(phi), 3 * std::sin(phi));
        g.kind.push_back(VertexKind::Outer);
        g.z_upper.push_back(0.0);
        g.z_lower.push_back(0.0);
    }
    const std::size_t m = outer.size();
    std::vector<int> assign(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 d = g.vertices[outer[(i + 1) % m]] - g.vertices[outer[i]];
        const Point2 nu(d.y(), -d.x());
        int best = 0;
        for (int k = 1; k < 3; ++k) {
            if (nu.dot(g.vertices[o0 + k]) > nu.dot(g.vertices[o0 + best])) best = k;
        }
        assign[i] = best;
    }
    auto push_ccw = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (geom::orient2d(g.vertices[a], g.vertices[b], g.vertices[c]) < 0.0) std::swap(b, c);
        g.triangles.push_back({a, b, c});
        g.crossing_triangle.push_back(false);
    };
    int steps = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t h0 = outer[i], h1 = outer[(i + 1) % m];
        push_ccw(h0, o0 + static_cast<std::size_t>(assign[i]), h1);
        for (int k = assign[i]; k != assign[(i + 1) % m]; k = (k + 1) % 3) {
            push_ccw(h1, o0 + static_cast<std::size_t>(k), o0 + static_cast<std::size_t>((k + 1) % 3));
            ++steps;
        }
    }
    const double outer_area = 0.5 * 3 * std::sqrt(3.0) / 2 * 9;
    double total = 0.0;
    for (const auto& t : g.triangles) total += 0.5 * geom::orient2d(g.vertices[t[0]], g.vertices[t[1]], g.vertices[t[2]]);
    if (steps != 3 || std::abs(total - outer_area) > 1e-9 * outer_area) {
        throw Error("plmesh", "annulus does not tile the outer triangle");
    }

    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& t : g.triangles) {
        for (int k = 0; k < 3; ++k) edge_set.insert({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
    }
    g.edges.clear();
    for (const auto& [a, b] : edge_set) g.edges.push_back({a, b});
    return g;
}

std::size_t tet_count_bound(std::size_t n) { return 290 * n * n + 290 * n + 116; }

namespace {

double signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

// Tets of the lifted complex and the two prism layers, at unit scale.
struct Builder {
    const AugmentedGraph& g;
    double min_volume;
    std::vector<Point3> verts;
    std::vector<std::array<std::size_t, 4>> tets;
    std::vector<std::size_t> up, low, top, bot;
    std::map<std::tuple<std::size_t, std::size_t, int>, std::size_t> quad_center;

    Builder(const AugmentedGraph& graph, double vmin) : g(graph), min_volume(vmin) {
        const std::size_t v = g.vertices.size();
        up.resize(v);
        low.resize(v);
        top.resize(v);
        bot.resize(v);
        for (std::size_t w = 0; w < v; ++w) {
            const Point2& p = g.vertices[w];
            up[w] = add({p.x(), p.y(), g.z_upper[w]});
            low[w] = g.kind[w] == VertexKind::Crossing ? add({p.x(), p.y(), g.z_lower[w]}) : up[w];
        }
        for (std::size_t w = 0; w < v; ++w) top[w] = add({g.vertices[w].x(), g.vertices[w].y(), 1.0});
        for (std::size_t w = 0; w < v; ++w) bot[w] = add({g.vertices[w].x(), g.vertices[w].y(), -1.0});
    }

    std::size_t add(const Point3& p) {
        verts.push_back(p);
        return verts.size() - 1;
    }

    void tet(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
        const double vol = signed_volume(verts[a], verts[b], verts[c], verts[d]);
        if (std::abs(vol) <= min_volume) throw Error("plmesh", "degenerate tetrahedron");
        if (vol < 0) std::swap(c, d);
        tets.push_back({a, b, c, d});
    }

    // Side quad over graph edge (a, b): lifted pair la, lb and the slab pair.
    std::size_t quad_mid(std::size_t a, std::size_t b, int side, const std::array<std::size_t, 4>& q) {
        const auto key = std::make_tuple(std::min(a, b), std::max(a, b), side);
        auto it = quad_center.find(key);
        if (it != quad_center.end()) return it->second;
        const Point3 m = 0.25 * (verts[q[0]] + verts[q[1]] + verts[q[2]] + verts[q[3]]);
        const std::size_t id = add(m);
        quad_center.emplace(key, id);
        return id;
    }

    void prism(const std::array<std::size_t, 3>& t, int side) {
        const auto& lift = side > 0 ? up : low;
        const auto& cap = side > 0 ? top : bot;
        std::array<std::size_t, 3> l{}, c{};
        for (int k = 0; k < 3; ++k) {
            l[k] = lift[t[k]];
            c[k] = cap[t[k]];
        }
        Point3 center = Point3::Zero();
        for (int k = 0; k < 3; ++k) center += verts[l[k]] + verts[c[k]];
        const std::size_t o = add(center / 6.0);
        tet(o, l[0], l[1], l[2]);
        tet(o, c[0], c[1], c[2]);
        for (int k = 0; k < 3; ++k) {
            const int j = (k + 1) % 3;
            const std::array<std::size_t, 4> q{l[k], l[j], c[j], c[k]};
            const std::size_t m = quad_mid(t[k], t[j], side, q);
            for (int e = 0; e < 4; ++e) tet(o, m, q[e], q[(e + 1) % 4]);
        }
    }
};

}  // namespace

TetMesh build_ball_triangulation(const PolygonalCurve& p, std::uint64_t seed, const Tolerance& tol) {
    tol.validate();
    const Normalized norm = normalize(p);
    const std::size_t n = p.vertices.size();
    std::string last;
    for (std::size_t first = 0; first < 10000;) {
        const Frame frame = find_regular_projection(norm.curve, seed, 10000, first);
        first = frame.trial + 1;
        AugmentedGraph g;
        try {
            g = augment_graph(build_projection_graph(norm.curve, frame.rotation));
        } catch (const Error& e) {
            last = e.what();
            continue;
        }
        if (g.triangles.size() > 10 * n * n + 10 * n + 4 || g.vertices.size() > 5 * n * n + 5 * n + 3) {
            throw Error("plmesh", "augmented graph exceeds its size bound");
        }
        Builder bld(g, std::pow(tol.eps_len, 3));
        for (std::size_t t = 0; t < g.triangles.size(); ++t) {
            const auto& tr = g.triangles[t];
            if (g.crossing_triangle[t]) {
                const std::size_t x = tr[0];
                if (g.kind[x] != VertexKind::Crossing) throw Error("plmesh", "crossing triangle without apex");
                bld.tet(bld.up[x], bld.low[x], bld.up[tr[1]], bld.up[tr[2]]);
            }
            bld.prism(tr, +1);
            bld.prism(tr, -1);
        }
        if (bld.tets.size() != 28 * g.triangles.size() + 4 * g.crossings) {
            throw Error("plmesh", "unexpected tetrahedron count");
        }
        TetMesh b;
        b.center = norm.center;
        b.length = norm.length;
        b.polygon_size = n;
        b.crossings = g.crossings;
        b.graph_vertices = g.vertices.size();
        b.graph_triangles = g.triangles.size();
        b.frame_trial = frame.trial;
        b.rotation = frame.rotation;
        b.tets = std::move(bld.tets);
        const Eigen::Matrix3d rt = frame.rotation.transpose();
        for (const auto& v : bld.verts) b.vertices.push_back(rt * (norm.length * v) + norm.center);
        for (std::size_t i = 0; i < n; ++i) b.vertices[bld.up[i]] = p.vertices[i];
        if (b.tets.size() >= tet_count_bound(n)) throw Error("plmesh", "tetrahedron count bound violated");
        for (const auto& v : b.vertices) {
            if ((v - b.center).norm() > 4 * b.length) throw Error("plmesh", "vertex outside radius 4L");
        }
        return b;
    }
    throw Error("plmesh", "no usable projection frame (" + last + ")");
}

namespace {

using Face = std::array<std::size_t, 3>;

// Faces used by one tet, oriented outward, plus pairing diagnostics.
struct FaceCensus {
    std::vector<Face> boundary;
    bool paired = true;
};

FaceCensus census(const TetMesh& b) {
    std::map<Face, std::vector<Face>> seen;
    for (const auto& t : b.tets) {
        // Outward faces of a positively oriented tet.
        const std::array<Face, 4> faces{Face{t[1], t[2], t[3]}, Face{t[0], t[3], t[2]}, Face{t[0], t[1], t[3]},
                                        Face{t[0], t[2], t[1]}};
        for (const auto& f : faces) {
            Face key = f;
            std::sort(key.begin(), key.end());
            seen[key].push_back(f);
        }
    }
    auto parity = [](const Face& f) {
        // Orientation class of a vertex ordering: rotate the smallest first.
        const auto k = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
        return f[(k + 1) % 3] < f[(k + 2) % 3];
    };
    FaceCensus c;
    for (const auto& [key, uses] : seen) {
        if (uses.size() == 1) {
            c.boundary.push_back(uses[0]);
        } else if (uses.size() != 2 || parity(uses[0]) == parity(uses[1])) {
            c.paired = false;
        }
    }
    return c;
}

}  // namespace

mesh::TriMesh boundary_surface(const TetMesh& b) {
    mesh::TriMesh m;
    std::map<std::size_t, std::size_t> remap;
    for (const auto& f : census(b).boundary) {
        mesh::Face out{};
        for (int k = 0; k < 3; ++k) {
            auto [it, fresh] = remap.emplace(f[k], m.vertices.size());
            if (fresh) m.vertices.push_back(b.vertices[f[k]]);
            out[k] = it->second;
        }
        m.faces.push_back(out);
    }
    return m;
}

TetReport validate_tetmesh(const TetMesh& b, const PolygonalCurve& p, const Tolerance& tol) {
    TetReport r;
    const double L = curves::length(p);
    const double len_tol = tol.eps_len * std::max(L, 1.0);
    auto fail = [&](const std::string& what) {
        if (r.first_failure.empty()) r.first_failure = what;
    };
    r.tets = b.tets.size();
    r.bound = tet_count_bound(p.vertices.size());

    r.orientation = true;
    for (std::size_t t = 0; t < b.tets.size(); ++t) {
        const auto& q = b.tets[t];
        for (auto i : q) {
            if (i >= b.vertices.size()) throw InputError("plmesh", "tet index out of range");
        }
        const double v = signed_volume(b.vertices[q[0]], b.vertices[q[1]], b.vertices[q[2]], b.vertices[q[3]]);
        r.tet_volume += v;
        if (!(v > std::pow(tol.eps_len, 3))) r.orientation = false;
    }
    if (!r.orientation) fail("orientation");

    const FaceCensus fc = census(b);
    std::map<std::pair<std::size_t, std::size_t>, int> edge_uses;
    for (const auto& f : fc.boundary) {
        for (int k = 0; k < 3; ++k) ++edge_uses[{std::min(f[k], f[(k + 1) % 3]), std::max(f[k], f[(k + 1) % 3])}];
    }
    r.closed_boundary = !fc.boundary.empty() && std::all_of(edge_uses.begin(), edge_uses.end(),
                                                            [](const auto& e) { return e.second == 2; });
    if (!r.closed_boundary) fail("closed_boundary");

    // Every boundary face must lie in a supporting plane of the vertex set.
    std::vector<std::pair<Vec3, double>> planes;
    bool supported = true;
    double extent = 0.0;
    for (const auto& v : b.vertices) extent = std::max(extent, (v - b.center).norm());
    const double plane_tol = 1e-9 * std::max(extent, 1.0);
    for (const auto& f : fc.boundary) {
        const Vec3 nrm = (b.vertices[f[1]] - b.vertices[f[0]]).cross(b.vertices[f[2]] - b.vertices[f[0]]);
        if (nrm.norm() <= 0.0) {
            supported = false;
            continue;
        }
        const Vec3 u = nrm.normalized();
        const double off = u.dot(b.vertices[f[0]]);
        const bool known = std::any_of(planes.begin(), planes.end(), [&](const auto& pl) {
            return pl.first.dot(u) > 1 - 1e-12 && std::abs(pl.second - off) <= plane_tol;
        });
        if (known) continue;
        bool ok = true;
        for (const auto& v : b.vertices) {
            if (u.dot(v) - off > plane_tol) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            supported = false;
            continue;
        }
        planes.push_back({u, off});
    }
    r.face_pairing = fc.paired && supported;
    if (!r.face_pairing) fail("face_pairing");
    r.convex = supported && r.closed_boundary;
    if (!r.convex) fail("convex");

    // Enclosed volume from the closed boundary.
    for (const auto& f : fc.boundary) {
        r.hull_volume += b.vertices[f[0]].dot(b.vertices[f[1]].cross(b.vertices[f[2]])) / 6.0;
    }
    r.volume = r.convex && std::abs(r.tet_volume - r.hull_volume) <= 1e-6 * std::abs(r.hull_volume);
    if (!r.volume) fail("volume");

    std::set<std::pair<std::size_t, std::size_t>> tet_edges;
    for (const auto& q : b.tets) {
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) tet_edges.insert({std::min(q[i], q[j]), std::max(q[i], q[j])});
        }
    }
    r.polygon_in_skeleton = true;
    const std::size_t n = p.vertices.size();
    for (std::size_t e = 0; e < n && r.polygon_in_skeleton; ++e) {
        const Point3 a = p.vertices[e], c = p.vertices[(e + 1) % n];
        const Vec3 d = c - a;
        std::vector<std::pair<double, std::size_t>> on;
        for (std::size_t v = 0; v < b.vertices.size(); ++v) {
            if (geom::point_segment_distance(b.vertices[v], a, c) <= len_tol) {
                on.push_back({(b.vertices[v] - a).dot(d) / d.squaredNorm(), v});
            }
        }
        std::sort(on.begin(), on.end());
        if (on.size() < 2 || (b.vertices[on.front().second] - a).norm() > len_tol ||
            (b.vertices[on.back().second] - c).norm() > len_tol) {
            r.polygon_in_skeleton = false;
            break;
        }
        for (std::size_t k = 0; k + 1 < on.size(); ++k) {
            const auto u = on[k].second, w = on[k + 1].second;
            if ((on[k + 1].first - on[k].first) * d.norm() <= len_tol ||
                !tet_edges.count({std::min(u, w), std::max(u, w)})) {
                r.polygon_in_skeleton = false;
                break;
            }
        }
    }
    if (!r.polygon_in_skeleton) fail("polygon_in_skeleton");

    for (const auto& v : b.vertices) r.max_radius = std::max(r.max_radius, (v - b.center).norm());
    r.radius = r.max_radius <= 4 * L * (1 + 1e-12);
    if (!r.radius) fail("radius");
    r.count = r.tets < r.bound;
    if (!r.count) fail("count");
    return r;
}

void write_tet(const TetMesh& b, std::ostream& out) {
    out << "tet\n" << b.vertices.size() << ' ' << b.tets.size() << '\n' << std::setprecision(17);
    for (const auto& v : b.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& t : b.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

PolygonalCurve random_unknot(std::size_t n, std::uint64_t seed) {
    if (n < 3) throw InputError("plmesh", "need at least 3 vertices");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> angle(n);
    for (std::size_t i = 0; i < n; ++i) angle[i] = 2 * M_PI * (i + 0.1 + 0.8 * u(rng)) / static_cast<double>(n);
    const Eigen::Matrix3d rot = random_rotation(rng);
    PolygonalCurve c;
    for (std::size_t i = 0; i < n; ++i) {
        const double rad = 0.5 + 0.5 * u(rng);
        const Point3 v(rad * std::cos(angle[i]), rad * std::sin(angle[i]), 0.05 * (u(rng) - 0.5));
        c.vertices.push_back(rot * v);
    }
    return c;
}

nlohmann::json to_json(const TetReport& r) {
    return {{"orientation", r.orientation},
            {"face_pairing", r.face_pairing},
            {"closed_boundary", r.closed_boundary},
            {"convex", r.convex},
            {"volume", r.volume},
            {"polygon_in_skeleton", r.polygon_in_skeleton},
            {"radius", r.radius},
            {"count", r.count},
            {"tet_volume", r.tet_volume},
            {"hull_volume", r.hull_volume},
            {"max_radius", r.max_radius},
            {"tets", r.tets},
            {"bound", r.bound},
            {"first_failure", r.first_failure},
            {"ok", r.ok()}};
}

}  // namespace knotspan::plmesh
