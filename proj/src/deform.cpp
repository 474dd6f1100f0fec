#include "knotspan/deform.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace knotspan::deform {

using nlohmann::json;

void RadialDiskMap::validate() const {
    if (!(d > 0.0)) throw InputError("deform", "disk radius must be positive");
    if (!(q.norm() < d)) throw InputError("deform", "offset must satisfy |q| < d");
}

Point2 sigma_apply(const RadialDiskMap& m, const Point2& w) {
    const double r = w.norm();
    if (r > m.d * (1.0 + 1e-12)) throw InputError("deform", "sigma applied outside its disk");
    return w + (1.0 - std::min(r, m.d) / m.d) * m.q;
}

Point2 sigma_inverse(const RadialDiskMap& m, const Point2& p) {
    if (p.norm() > m.d * (1.0 + 1e-12)) throw InputError("deform", "sigma inverse applied outside its disk");
    // f(rho) = |p - (1 - rho/d) q| - rho decreases strictly on [0, d].
    auto f = [&](double rho) { return (p - (1.0 - rho / m.d) * m.q).norm() - rho; };
    double lo = 0.0, hi = m.d;
    if (f(lo) <= 0.0) return p - m.q;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * m.d; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double rho = 0.5 * (lo + hi);
    return p - (1.0 - rho / m.d) * m.q;
}

bool LipschitzReport::ok() const {
    return empirical <= bound + 1e-9 && inverse_empirical <= inverse_bound + 1e-6 && displacement_ok;
}

namespace {

Point2 random_in_disk(std::mt19937_64& rng, double d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = d * std::sqrt(u(rng));
    const double phi = 2.0 * M_PI * u(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

// Second point of a pair: either independent or a short hop from the first.
Point2 partner(std::mt19937_64& rng, const Point2& w, double d, bool close) {
    if (!close) return random_in_disk(rng, d);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 16; ++k) {
        const double phi = 2.0 * M_PI * u(rng);
        const Point2 p = w + (1e-3 * d * u(rng)) * Point2(std::cos(phi), std::sin(phi));
        if (p.norm() <= d) return p;
    }
    return random_in_disk(rng, d);
}

}  // namespace

LipschitzReport sigma_lipschitz_check(const RadialDiskMap& m, std::size_t trials, std::uint64_t seed) {
    m.validate();
    LipschitzReport rep;
    rep.bound = 1.0 + m.q.norm() / m.d;
    rep.inverse_bound = 1.0 / (1.0 - m.q.norm() / m.d);
    rep.displacement_ok = true;
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < trials; ++k) {
        const bool close = (k % 2) == 1;
        const Point2 w1 = random_in_disk(rng, m.d);
        const Point2 w2 = partner(rng, w1, m.d, close);
        const double dw = (w1 - w2).norm();
        if (dw > 0.0) {
            rep.empirical = std::max(rep.empirical, (sigma_apply(m, w1) - sigma_apply(m, w2)).norm() / dw);
            rep.inverse_empirical =
                std::max(rep.inverse_empirical, (sigma_inverse(m, w1) - sigma_inverse(m, w2)).norm() / dw);
        }
        RadialDiskMap other{random_in_disk(rng, m.d * (1.0 - 1e-9)), m.d};
        const double moved = (sigma_apply(m, w1) - sigma_apply(other, w1)).norm();
        if (moved > (m.q - other.q).norm() + 1e-12 * m.d) rep.displacement_ok = false;
        ++rep.pairs;
    }
    return rep;
}

namespace {

std::pair<Vec3, Vec3> frame(const Vec3& u) {
    const Vec3 seed = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = u.cross(seed).normalized();
    return {e1, u.cross(e1)};
}

double driver_lipschitz(const std::vector<double>& t, const std::vector<Point2>& w) {
    double c = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        c = std::max(c, std::hypot((w[i] - w[i - 1]).norm(), dt) / dt);
    }
    return c;
}

}  // namespace

ConeMap ConeMap::axis(const Cone& c) {
    ConeMap m;
    m.cone = c;
    std::tie(m.e1, m.e2) = frame(c.axis_dir);
    m.t = {0.0, c.h};
    m.offset = {Point2::Zero(), Point2::Zero()};
    m.lipschitz_driver = 1.0;
    return m;
}

ConeMap ConeMap::from_arc(const Cone& c, const curves::SampledCurve& arc, const Tolerance& tol) {
    ConeMap m = axis(c);
    m.t.clear();
    m.offset.clear();
    const double slack = tol.eps_len + 1e-12 * c.h;
    for (std::size_t i = 0; i < arc.size(); ++i) {
        const auto l = m.to_local(arc.samples[i]);
        double t = l.z();
        Point2 w(l.x(), l.y());
        if (i == 0) {
            if ((arc.samples[i] - c.apex).norm() > slack) throw Error("deform", "driver does not start at the apex");
            t = 0.0;
            w.setZero();
        } else if (i + 1 == arc.size()) {
            if ((arc.samples[i] - c.base_center).norm() > slack) {
                throw Error("deform", "driver does not end at the base centre");
            }
            t = c.h;
            w.setZero();
        }
        if (w.norm() > c.b() * std::max(t, 0.0) + slack) {
            throw Error("deform", "driver sample " + std::to_string(i) + " outside the cone");
        }
        if (!m.t.empty() && t <= m.t.back()) {
            // Numerically flat spot: nudge forward; a real reversal is an error.
            if (t < m.t.back() - slack) throw Error("deform", "driver not monotone at sample " + std::to_string(i));
            t = m.t.back() + 1e-12 * c.h;
        }
        m.t.push_back(t);
        m.offset.push_back(w);
    }
    if (m.t.back() > c.h) {
        throw Error("deform", "driver overshoots the base after tie-breaking");
    }
    m.lipschitz_driver = driver_lipschitz(m.t, m.offset);
    return m;
}

Point2 ConeMap::driver_at(double s) const {
    if (s <= t.front()) return offset.front();
    if (s >= t.back()) return offset.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double u = (s - t[i]) / (t[i + 1] - t[i]);
    return offset[i] + u * (offset[i + 1] - offset[i]);
}

Point3 ConeMap::to_world(const Point2& w, double s) const {
    return cone.apex + w.x() * e1 + w.y() * e2 + s * cone.axis_dir;
}

Eigen::Vector3d ConeMap::to_local(const Point3& p) const {
    const Vec3 v = p - cone.apex;
    return {v.dot(e1), v.dot(e2), v.dot(cone.axis_dir)};
}

Point3 cone_map_apply(const ConeMap& m, const Point3& p, double eps) {
    const auto l = m.to_local(p);
    const double b = m.cone.b();
    Point2 w(l.x(), l.y());
    const double t = l.z();
    if (t < -eps || t > m.cone.h + eps || w.norm() > b * std::max(t, 0.0) + eps) {
        throw InputError("deform", "point outside the cone");
    }
    const double tc = std::clamp(t, 0.0, m.cone.h);
    const double d = b * tc;
    if (d <= 0.0) return p;
    if (w.norm() > d) w *= d / w.norm();
    const RadialDiskMap sigma{m.driver_at(tc), d};
    const Point2 img = sigma_apply(sigma, w);
    // Keep out-of-clamp residue so the map stays continuous at the surface.
    return m.to_world(img + (Point2(l.x(), l.y()) - w), t);
}

namespace {

Point3 random_in_cone(std::mt19937_64& rng, const ConeMap& m) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double t = m.cone.h * std::cbrt(u(rng));
    const Point2 w = random_in_disk(rng, m.cone.b() * t);
    return m.to_world(w, t);
}

}  // namespace

ConeLipschitzReport cone_lipschitz_check(const ConeMap& m, std::size_t trials, std::uint64_t seed) {
    ConeLipschitzReport rep;
    const double b = m.cone.b();
    rep.c_l = m.lipschitz_driver;
    rep.lemma_bound = 4.0 * std::sqrt(1.0 + b * b) + rep.c_l + 2.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    for (std::size_t k = 0; k < trials; ++k) {
        const Point3 p1 = random_in_cone(rng, m);
        Point3 p2;
        if (k % 2 == 0) {
            p2 = random_in_cone(rng, m);
        } else {
            bool found = false;
            for (int tries = 0; tries < 16 && !found; ++tries) {
                const Vec3 dir = Vec3(g(rng), g(rng), g(rng)).normalized();
                p2 = p1 + (1e-3 * m.cone.h * u(rng)) * dir;
                found = m.cone.contains(p2, 0.0);
            }
            if (!found) p2 = random_in_cone(rng, m);
        }
        const double d = (p1 - p2).norm();
        if (d <= 0.0) continue;
        rep.empirical = std::max(rep.empirical, (cone_map_apply(m, p1) - cone_map_apply(m, p2)).norm() / d);
    }
    rep.within_five = rep.empirical <= 5.0;
    return rep;
}

long NecklaceMap::locate(const Point3& p) const {
    for (std::size_t j = 0; j < maps.size(); ++j) {
        const Cone& c = maps[j].cone;
        if ((p - c.apex).norm() > std::hypot(c.h, c.base_radius()) + eps) continue;
        if (c.contains(p, eps)) return static_cast<long>(j);
    }
    return -1;
}

Point3 NecklaceMap::apply(const Point3& p) const {
    const long j = locate(p);
    return j < 0 ? p : cone_map_apply(maps[static_cast<std::size_t>(j)], p, eps);
}

NecklaceMap build_necklace_map(const inscribe::InscribedPolygon& ip, const std::vector<Cone>& cones,
                               const Tolerance& tol) {
    if (cones.size() != ip.n) throw InputError("deform", "one cone per polygon edge expected");
    NecklaceMap nm;
    nm.eps = tol.eps_len;
    for (std::size_t j = 0; j < ip.n; ++j) nm.maps.push_back(ConeMap::from_arc(cones[j], ip.arc(j), tol));
    return nm;
}

TriMesh flat_necklace_mesh(const inscribe::InscribedPolygon& ip, const std::vector<Cone>& cones, std::size_t m,
                           const Tolerance& tol) {
    if (m < 1) throw InputError("deform", "edge subdivision must be positive");
    const std::size_t n = ip.n;
    // Newell normal of P'.
    Vec3 normal = Vec3::Zero();
    Point3 centroid = Point3::Zero();
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const Point3& a = ip.vertices[j];
        const Point3& b = ip.vertices[(j + 1) % n];
        normal += Vec3((a.y() - b.y()) * (a.z() + b.z()), (a.z() - b.z()) * (a.x() + b.x()),
                       (a.x() - b.x()) * (a.y() + b.y()));
        centroid += a / static_cast<double>(n);
        scale = std::max(scale, (b - a).norm());
    }
    if (normal.norm() <= tol.eps_len) throw Error("deform", "polygon has no well-defined plane");
    normal.normalize();
    for (const auto& z : ip.vertices) {
        if (std::abs((z - centroid).dot(normal)) > tol.eps_len + 1e-12 * scale * static_cast<double>(n)) {
            throw Error("deform", "flat mesh needs a planar polygon");
        }
    }
    TriMesh out;
    out.vertices = ip.vertices;
    std::vector<std::size_t> rim(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Cone& c = cones[j];
        // Newell normal is counterclockwise-positive, so normal x e points inward.
        rim[j] = out.vertices.size();
        out.vertices.push_back(c.base_center + c.base_radius() * normal.cross(c.axis_dir).normalized());
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::size_t> chain{j};
        for (std::size_t k = 1; k < m; ++k) {
            chain.push_back(out.vertices.size());
            const double u = static_cast<double>(k) / static_cast<double>(m);
            out.vertices.push_back((1.0 - u) * ip.vertices[j] + u * ip.vertices[(j + 1) % n]);
        }
        chain.push_back((j + 1) % n);
        for (std::size_t k = 0; k < m; ++k) out.faces.push_back({chain[k], chain[k + 1], rim[j]});
    }
    // Sawtooth polygon z_0, q_0, z_1, q_1, ... in plane coordinates.
    const Vec3 ex = (ip.vertices[0] - centroid).normalized();
    const Vec3 ey = normal.cross(ex);
    std::vector<std::size_t> ring;
    std::vector<Point2> flat;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t v : {j, rim[j]}) {
            ring.push_back(v);
            const Vec3 d = out.vertices[v] - centroid;
            flat.emplace_back(d.dot(ex), d.dot(ey));
        }
    }
    for (const auto& t : geom::triangulate_polygon(flat, 1e-14 * scale * scale)) {
        out.faces.push_back({ring[t[0]], ring[t[1]], ring[t[2]]});
    }
    double polygon_area = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        polygon_area += 0.5 * (ip.vertices[j] - centroid).cross(ip.vertices[(j + 1) % n] - centroid).dot(normal);
    }
    if (std::abs(out.area() - polygon_area) > 1e-9 * polygon_area) {
        throw Error("deform", "flat mesh area differs from the polygon area");
    }
    return out;
}

namespace {

// Strictly interior by a margin of eps.
bool strictly_inside(const Cone& c, const Point3& p, double eps) {
    const Point2 q = c.local(p);
    return q.x() > eps && q.x() < c.h - eps && q.y() < c.b() * q.x() - eps;
}

enum class Region { Inside, Outside, Straddle };

Region classify(const NecklaceMap& nm, const geom::Triangle& t) {
    for (const auto& cm : nm.maps) {
        const Cone& c = cm.cone;
        if (c.contains(t[0], nm.eps) && c.contains(t[1], nm.eps) && c.contains(t[2], nm.eps)) return Region::Inside;
    }
    const Point3 centre = (t[0] + t[1] + t[2]) / 3.0;
    double reach = 0.0;
    for (const auto& v : t) reach = std::max(reach, (v - centre).norm());
    for (const auto& cm : nm.maps) {
        const Cone& c = cm.cone;
        if ((centre - c.apex).norm() > reach + std::hypot(c.h, c.base_radius())) continue;
        constexpr int K = 6;
        for (int i = 0; i <= K; ++i) {
            for (int j = 0; i + j <= K; ++j) {
                const double u = double(i) / K, v = double(j) / K;
                const Point3 p = (1 - u - v) * t[0] + u * t[1] + v * t[2];
                if (strictly_inside(c, p, nm.eps)) return Region::Straddle;
            }
        }
    }
    return Region::Outside;
}

using EdgeKey = std::pair<std::size_t, std::size_t>;
EdgeKey key(std::size_t a, std::size_t b) { return {std::min(a, b), std::max(a, b)}; }

// Conforming split of the marked edges: 1, 2 or 3 split edges per face.
void split_edges(TriMesh& m, const std::map<EdgeKey, std::size_t>& marked_in) {
    std::map<EdgeKey, std::size_t> mid;
    for (const auto& [e, unused] : marked_in) {
        (void)unused;
        mid[e] = m.vertices.size();
        m.vertices.push_back(0.5 * (m.vertices[e.first] + m.vertices[e.second]));
    }
    std::vector<mesh::Face> faces;
    for (const auto& f : m.faces) {
        std::array<long, 3> mk{};
        int count = 0;
        for (int k = 0; k < 3; ++k) {
            auto it = mid.find(key(f[k], f[(k + 1) % 3]));
            mk[k] = it == mid.end() ? -1 : static_cast<long>(it->second);
            count += it != mid.end();
        }
        if (count == 0) {
            faces.push_back(f);
            continue;
        }
        if (count == 3) {
            const auto a = static_cast<std::size_t>(mk[0]), b = static_cast<std::size_t>(mk[1]),
                       c = static_cast<std::size_t>(mk[2]);
            faces.push_back({f[0], a, c});
            faces.push_back({a, f[1], b});
            faces.push_back({c, b, f[2]});
            faces.push_back({a, b, c});
            continue;
        }
        // Rotate so that edge 0 is split and, for two splits, edge 2 is not.
        int r = 0;
        for (; r < 3; ++r) {
            if (mk[r] < 0) continue;
            if (count == 1 || mk[(r + 2) % 3] < 0) break;
        }
        const std::size_t v0 = f[r], v1 = f[(r + 1) % 3], v2 = f[(r + 2) % 3];
        const auto m01 = static_cast<std::size_t>(mk[r]);
        if (count == 1) {
            faces.push_back({v0, m01, v2});
            faces.push_back({m01, v1, v2});
        } else {
            const auto m12 = static_cast<std::size_t>(mk[(r + 1) % 3]);
            faces.push_back({m01, v1, m12});
            faces.push_back({v0, m01, m12});
            faces.push_back({v0, m12, v2});
        }
    }
    m.faces = std::move(faces);
}

double triangle_stretch(const geom::Triangle& from, const geom::Triangle& to) {
    const Vec3 u = from[1] - from[0], v = from[2] - from[0];
    const Vec3 ex = u.normalized();
    const Vec3 ey = (v - v.dot(ex) * ex).normalized();
    Eigen::Matrix2d E;
    E << u.dot(ex), v.dot(ex), u.dot(ey), v.dot(ey);
    Eigen::Matrix<double, 3, 2> F;
    F.col(0) = to[1] - to[0];
    F.col(1) = to[2] - to[0];
    const Eigen::Matrix<double, 3, 2> M = F * E.inverse();
    const Eigen::Matrix2d G = M.transpose() * M;
    const double tr = G.trace(), det = G.determinant();
    return std::sqrt(0.5 * (tr + std::sqrt(std::max(tr * tr - 4.0 * det, 0.0))));
}

}  // namespace

std::pair<TriMesh, DeformReport> necklace_map_mesh(const NecklaceMap& nm, const TriMesh& mesh_in,
                                                   const curves::SampledCurve& curve, const Tolerance& tol) {
    mesh_in.validate();
    DeformReport rep;
    rep.area_in = mesh_in.area();
    TriMesh m = mesh_in;
    constexpr std::size_t kBudget = 12;
    for (;;) {
        std::map<EdgeKey, std::size_t> marked;
        for (std::size_t f = 0; f < m.faces.size(); ++f) {
            if (classify(nm, m.triangle(f)) != Region::Straddle) continue;
            const auto& t = m.faces[f];
            int longest = 0;
            for (int k = 1; k < 3; ++k) {
                if ((m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]]).squaredNorm() >
                    (m.vertices[t[(longest + 1) % 3]] - m.vertices[t[longest]]).squaredNorm()) {
                    longest = k;
                }
            }
            marked.emplace(key(t[longest], t[(longest + 1) % 3]), 0);
        }
        if (marked.empty()) break;
        if (rep.refinement_rounds == kBudget) {
            throw Error("deform", std::to_string(marked.size()) +
                                      " triangles still straddle a cone boundary after refinement budget");
        }
        split_edges(m, marked);
        ++rep.refinement_rounds;
    }
    for (std::size_t f = 0; f < m.faces.size(); ++f) rep.triangles_in_cones += classify(nm, m.triangle(f)) == Region::Inside;

    TriMesh out = m;
    for (auto& v : out.vertices) v = nm.apply(v);
    rep.area_out = out.area();
    rep.ratio = rep.area_out / rep.area_in;
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        rep.empirical_lipschitz = std::max(rep.empirical_lipschitz, triangle_stretch(m.triangle(f), out.triangle(f)));
    }
    const std::size_t ns = curve.size();
    const std::size_t segs = curve.closed ? ns : ns - 1;
    for (const auto& loop : mesh::boundary_loops(out)) {
        for (std::size_t v : loop) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < segs; ++i) {
                best = std::min(best, geom::point_segment_distance(out.vertices[v], curve.samples[i],
                                                                   curve.samples[(i + 1) % ns]));
            }
            rep.max_boundary_residual = std::max(rep.max_boundary_residual, best);
        }
    }
    (void)tol;
    return {out, rep};
}

json to_json(const DeformReport& r) {
    return {{"area_in", r.area_in},
            {"area_out", r.area_out},
            {"ratio", r.ratio},
            {"max_boundary_residual", r.max_boundary_residual},
            {"empirical_lipschitz", r.empirical_lipschitz},
            {"refinement_rounds", r.refinement_rounds},
            {"triangles_in_cones", r.triangles_in_cones}};
}

json to_json(const ConeLipschitzReport& r) {
    return {{"lemma_bound", r.lemma_bound},
            {"empirical", r.empirical},
            {"c_l", r.c_l},
            {"within_five", r.within_five},
            {"ok", r.ok()}};
}

json to_json(const LipschitzReport& r) {
    return {{"bound", r.bound},
            {"empirical", r.empirical},
            {"inverse_bound", r.inverse_bound},
            {"inverse_empirical", r.inverse_empirical},
            {"displacement_ok", r.displacement_ok},
            {"pairs", r.pairs},
            {"ok", r.ok()}};
}

}  // namespace knotspan::deform
