#include "knotspan/disks.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace knotspan::disks {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge key(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Oriented edge -> faces using it in that direction.
std::map<Edge, std::vector<std::size_t>> directed_edges(const TriMesh& m) {
    std::map<Edge, std::vector<std::size_t>> out;
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        const auto& t = m.faces[f];
        for (int k = 0; k < 3; ++k) out[{t[k], t[(k + 1) % 3]}].push_back(f);
    }
    return out;
}

double xz_origin_distance(const Point3& a, const Point3& b) {
    return geom::point_segment_distance_2d(Point2(0, 0), Point2(a.x(), a.z()), Point2(b.x(), b.z()));
}

}  // namespace

SpanningDisk make_disk(TriMesh m, std::optional<curves::PolygonalCurve> target) {
    m.validate();
    SpanningDisk sd;
    try {
        const auto loops = mesh::boundary_loops(m);
        if (loops.size() == 1) sd.boundary = loops[0];
    } catch (const Error&) {
    }
    sd.mesh = std::move(m);
    sd.target = std::move(target);
    return sd;
}

SpanningDisk read_disk(const std::string& off_path) { return make_disk(mesh::read_off(off_path)); }

std::size_t improper_triangle_pairs(const TriMesh& m, const Tolerance& tol, bool stop_at_first) {
    const std::size_t nf = m.faces.size();
    std::vector<Eigen::AlignedBox3d> box(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        for (auto v : m.faces[f]) box[f].extend(m.vertices[v]);
    }
    std::vector<std::size_t> order(nf);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return box[a].min().x() < box[b].min().x(); });
    std::size_t bad = 0;
    const double e = tol.eps_len;
    for (std::size_t i = 0; i < nf; ++i) {
        const auto fi = order[i];
        for (std::size_t j = i + 1; j < nf; ++j) {
            const auto fj = order[j];
            if (box[fj].min().x() > box[fi].max().x() + e) break;
            if (box[fj].min().y() > box[fi].max().y() + e || box[fi].min().y() > box[fj].max().y() + e ||
                box[fj].min().z() > box[fi].max().z() + e || box[fi].min().z() > box[fj].max().z() + e) {
                continue;
            }
            geom::TriTriClass c;
            try {
                c = geom::triangle_triangle_intersect(m.triangle(fi), m.triangle(fj), tol);
            } catch (const InputError&) {
                c = geom::TriTriClass::Improper;
            }
            if (c == geom::TriTriClass::Improper) {
                ++bad;
                if (stop_at_first) return bad;
            }
        }
    }
    return bad;
}

DiskReport check_disk(const SpanningDisk& sd, const Tolerance& tol) {
    const TriMesh& m = sd.mesh;
    DiskReport r;
    const std::size_t nv = m.vertices.size();

    // Connectivity over vertices; an unused vertex is its own component.
    std::vector<std::size_t> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& t : m.faces) {
        parent[find(t[1])] = find(t[0]);
        parent[find(t[2])] = find(t[0]);
    }
    std::size_t comps = 0;
    for (std::size_t v = 0; v < nv; ++v) comps += find(v) == v;
    r.connected = nv > 0 && comps == 1;

    const auto dir = directed_edges(m);
    std::map<Edge, std::size_t> undirected;
    for (const auto& [e, fs] : dir) undirected[key(e.first, e.second)] += fs.size();
    r.euler_characteristic = static_cast<long>(nv) - static_cast<long>(undirected.size()) +
                             static_cast<long>(m.faces.size());
    r.euler = r.euler_characteristic == 1;

    r.edge_manifold = std::all_of(undirected.begin(), undirected.end(), [](const auto& e) { return e.second <= 2; });
    r.orientable = std::all_of(dir.begin(), dir.end(), [](const auto& e) { return e.second.size() == 1; });

    try {
        const auto loops = mesh::boundary_loops(m);
        r.boundary_components = loops.size();
        r.single_boundary = loops.size() == 1;
    } catch (const Error&) {
        r.single_boundary = false;
    }

    r.improper_pairs = improper_triangle_pairs(m, tol);
    r.embedded = r.improper_pairs == 0;

    r.boundary_on_target = true;
    if (sd.target) {
        const auto& tv = sd.target->vertices;
        for (auto v : sd.boundary) {
            double d = 1e300;
            for (std::size_t i = 0; i < tv.size(); ++i) {
                d = std::min(d, geom::point_segment_distance(m.vertices[v], tv[i], tv[(i + 1) % tv.size()]));
            }
            if (d > tol.eps_len) {
                r.boundary_on_target = false;
                break;
            }
        }
        r.boundary_on_target = r.boundary_on_target && !sd.boundary.empty();
    }
    return r;
}

double mesh_area(const SpanningDisk& sd) { return sd.mesh.area(); }

namespace {

// Distance between an infinite line and a closed segment.
double line_segment_distance(const Point3& o, const Vec3& d, const Point3& a, const Point3& b) {
    const Vec3 u = b - a, w = a - o;
    const double dd = d.dot(d), du = d.dot(u), uu = u.dot(u), dw = d.dot(w), uw = u.dot(w);
    const double den = dd * uu - du * du;
    double s = den > 1e-300 ? std::clamp((du * dw - dd * uw) / den, 0.0, 1.0) : 0.0;
    auto dist = [&](double s_) {
        const Point3 p = a + s_ * u;
        const double t = d.dot(p - o) / dd;
        return (p - (o + t * d)).norm();
    };
    return std::min({dist(s), dist(0.0), dist(1.0)});
}

// Pierce count of the line o + t d through the given faces; nullopt when the
// line is not transverse to some face.
std::optional<std::size_t> count_hits(const TriMesh& m, const std::vector<std::size_t>& faces, const Point3& o,
                                      const Vec3& d, double eps) {
    std::size_t count = 0;
    for (auto f : faces) {
        const auto& t = m.faces[f];
        const Point3& a = m.vertices[t[0]];
        const Point3& b = m.vertices[t[1]];
        const Point3& c = m.vertices[t[2]];
        const Vec3 e1 = b - a, e2 = c - a;
        const Vec3 pv = d.cross(e2);
        const double det = e1.dot(pv);
        if (std::abs(det) <= 1e-12 * e1.norm() * e2.norm() * d.norm()) {
            if (std::min({line_segment_distance(o, d, a, b), line_segment_distance(o, d, b, c),
                          line_segment_distance(o, d, c, a)}) <= eps) {
                return std::nullopt;
            }
            continue;
        }
        const Vec3 tv = o - a;
        const double u = tv.dot(pv) / det;
        const Vec3 qv = tv.cross(e1);
        const double v = d.dot(qv) / det;
        const double w = 1.0 - u - v;
        if (std::min({u, v, w}) < -0.1) continue;
        const double tt = e2.dot(qv) / det;
        const Point3 q = o + tt * d;
        const double edge = std::min({geom::point_segment_distance(q, a, b), geom::point_segment_distance(q, b, c),
                                      geom::point_segment_distance(q, c, a)});
        if (edge < eps) return std::nullopt;
        if (u > 0 && v > 0 && w > 0) ++count;
    }
    return count;
}

LineCount count_with_jitter(const TriMesh& m, const std::vector<std::size_t>& faces, const Line& line,
                            std::uint64_t seed, const Tolerance& tol) {
    const Vec3 d = line.direction.normalized();
    const Vec3 e1 = d.unitOrthogonal(), e2 = d.cross(e1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    LineCount out;
    Point3 p = line.point;
    for (std::size_t attempt = 0; attempt <= 100; ++attempt) {
        if (auto c = count_hits(m, faces, p, d, tol.eps_len)) {
            out.count = *c;
            out.used_point = p;
            return out;
        }
        if (attempt == 100) break;
        ++out.jitters;
        const double r = 10.0 * tol.eps_len * std::sqrt(uni(rng)), phi = 2.0 * M_PI * uni(rng);
        p = line.point + r * (std::cos(phi) * e1 + std::sin(phi) * e2);
    }
    throw Error("disks", "line could not be made transverse to the mesh after 100 jitters");
}

}  // namespace

LineCount line_intersection_count(const TriMesh& m, const Line& line, std::uint64_t seed, const Tolerance& tol) {
    if (!(line.direction.norm() > 0)) throw InputError("disks", "line direction must be nonzero");
    std::vector<std::size_t> all(m.faces.size());
    std::iota(all.begin(), all.end(), 0);
    return count_with_jitter(m, all, line, seed, tol);
}

double rect_disk_area(double x0, double x1, double z0, double z1, double r) {
    if (x1 <= x0 || z1 <= z0 || r <= 0) return 0.0;
    auto s = [r](double x) { return std::sqrt(std::max(0.0, r * r - x * x)); };
    auto S = [r, &s](double x) {  // antiderivative of s
        x = std::clamp(x, -r, r);
        return 0.5 * (x * s(x) + r * r * std::asin(x / r));
    };
    std::vector<double> cuts{std::max(x0, -r), std::min(x1, r)};
    if (cuts[0] >= cuts[1]) return 0.0;
    for (double z : {z0, z1}) {
        if (std::abs(z) < r) {
            for (double x : {-std::sqrt(r * r - z * z), std::sqrt(r * r - z * z)}) {
                if (x > cuts[0] && x < cuts[1]) cuts.push_back(x);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        // The ordering of s against z0, z1 is fixed inside a piece; sample
        // twice so a tangency at one point cannot decide it.
        const double a = cuts[i], b = cuts[i + 1];
        const double s1 = s(a + (b - a) / 3.0), s2 = s(b - (b - a) / 3.0);
        const bool hi_s = s1 < z1 || s2 < z1, lo_s = -s1 > z0 || -s2 > z0;
        if (std::min(hi_s ? s1 : z1, hi_s ? s2 : z1) <= std::max(lo_s ? -s1 : z0, lo_s ? -s2 : z0)) continue;
        // Integrand hi - lo, each either a constant or +-s.
        const double ks = (hi_s ? 1.0 : 0.0) + (lo_s ? 1.0 : 0.0);
        const double kc = (hi_s ? 0.0 : z1) - (lo_s ? 0.0 : z0);
        area += ks * (S(b) - S(a)) + kc * (b - a);
    }
    return area;
}

AreaCertificate cylinder_area_certificate(const SpanningDisk& sd, double r0, std::size_t n, std::size_t resolution,
                                          std::uint64_t seed, const Tolerance& tol) {
    if (!(r0 > 0)) throw InputError("disks", "r0 must be positive");
    if (resolution < 256) throw InputError("disks", "certificate grid must be at least 256 x 256");
    if (sd.boundary.empty()) throw InputError("disks", "mesh has no single boundary loop");
    const auto& m = sd.mesh;
    for (std::size_t i = 0; i < sd.boundary.size(); ++i) {
        const Point3& a = m.vertices[sd.boundary[i]];
        const Point3& b = m.vertices[sd.boundary[(i + 1) % sd.boundary.size()]];
        if (xz_origin_distance(a, b) <= r0) throw Error("disks", "boundary enters the cylinder of radius r0");
    }

    // Bin faces by their xz bounding boxes over the cross-section square.
    const std::size_t bins = 64;
    const double bw = 2.0 * r0 / bins;
    std::vector<std::vector<std::size_t>> bin(bins * bins);
    for (std::size_t f = 0; f < m.faces.size(); ++f) {
        double xl = 1e300, xh = -1e300, zl = 1e300, zh = -1e300;
        for (auto v : m.faces[f]) {
            xl = std::min(xl, m.vertices[v].x());
            xh = std::max(xh, m.vertices[v].x());
            zl = std::min(zl, m.vertices[v].z());
            zh = std::max(zh, m.vertices[v].z());
        }
        const double pad = 20.0 * tol.eps_len;
        auto lo = [&](double x) { return static_cast<long>(std::floor((x - pad + r0) / bw)); };
        auto hi = [&](double x) { return static_cast<long>(std::floor((x + pad + r0) / bw)); };
        const long i0 = std::max(0L, lo(xl)), i1 = std::min<long>(bins - 1, hi(xh));
        const long k0 = std::max(0L, lo(zl)), k1 = std::min<long>(bins - 1, hi(zh));
        for (long i = i0; i <= i1; ++i) {
            for (long k = k0; k <= k1; ++k) bin[static_cast<std::size_t>(i) * bins + static_cast<std::size_t>(k)].push_back(f);
        }
    }

    AreaCertificate cert;
    cert.r0 = r0;
    cert.resolution = resolution;
    cert.mesh_area = m.area();
    cert.c7_reference = (M_PI * r0 * r0 / 2.0) * std::pow(2.0, static_cast<double>(n));
    cert.min_multiplicity = std::numeric_limits<std::size_t>::max();

    auto integrate = [&](std::size_t res, bool record) {
        const double h = 2.0 * r0 / static_cast<double>(res);
        double total = 0.0;
        for (std::size_t i = 0; i < res; ++i) {
            for (std::size_t k = 0; k < res; ++k) {
                const double x0 = -r0 + h * static_cast<double>(i), z0 = -r0 + h * static_cast<double>(k);
                const double w = rect_disk_area(x0, x0 + h, z0, z0 + h, r0);
                if (w <= 0.0) continue;
                const double xc = x0 + 0.5 * h, zc = z0 + 0.5 * h;
                const auto bi = std::min<std::size_t>(bins - 1, static_cast<std::size_t>((xc + r0) / bw));
                const auto bk = std::min<std::size_t>(bins - 1, static_cast<std::size_t>((zc + r0) / bw));
                const auto lc = count_with_jitter(m, bin[bi * bins + bk], {Point3(xc, 0, zc), Vec3(0, 1, 0)},
                                                  seed + i * res + k, tol);
                total += w * static_cast<double>(lc.count);
                if (record) {
                    cert.jitters += lc.jitters;
                    cert.min_multiplicity = std::min(cert.min_multiplicity, lc.count);
                    cert.max_multiplicity = std::max(cert.max_multiplicity, lc.count);
                }
            }
        }
        return total;
    };
    cert.certified_lower_bound = integrate(resolution, true);
    cert.refined_bound = integrate(2 * resolution, false);
    cert.extrapolated = 2.0 * cert.refined_bound - cert.certified_lower_bound;
    cert.sound = cert.mesh_area >= 0.95 * cert.certified_lower_bound;
    return cert;
}

std::vector<Vec3> area_gradient(const TriMesh& m) {
    std::vector<Vec3> g(m.vertices.size(), Vec3::Zero());
    for (const auto& t : m.faces) {
        const Point3& a = m.vertices[t[0]];
        const Point3& b = m.vertices[t[1]];
        const Point3& c = m.vertices[t[2]];
        const Vec3 n = (b - a).cross(c - a);
        const double len = n.norm();
        if (len == 0.0) continue;
        const Vec3 nh = n / len;
        g[t[0]] += 0.5 * nh.cross(c - b);
        g[t[1]] += 0.5 * nh.cross(a - c);
        g[t[2]] += 0.5 * nh.cross(b - a);
    }
    return g;
}

double min_angle_deg(const TriMesh& m) {
    double best = 180.0;
    for (const auto& t : m.faces) {
        for (int k = 0; k < 3; ++k) {
            const Vec3 u = m.vertices[t[(k + 1) % 3]] - m.vertices[t[k]];
            const Vec3 v = m.vertices[t[(k + 2) % 3]] - m.vertices[t[k]];
            best = std::min(best, std::atan2(u.cross(v).norm(), u.dot(v)) * 180.0 / M_PI);
        }
    }
    return best;
}

MinimizeResult minimize_area(const SpanningDisk& sd, std::size_t max_iters, const MinimizeOptions& opt,
                             const Tolerance& tol) {
    if (min_angle_deg(sd.mesh) < opt.min_angle_deg) {
        throw Error("disks", "input triangles violate the minimum angle floor; remesh before minimizing");
    }
    const std::size_t nv = sd.mesh.vertices.size();
    std::vector<bool> fixed(nv, false);
    for (const auto& loop : mesh::boundary_loops(sd.mesh)) {
        for (auto v : loop) fixed[v] = true;
    }
    MinimizeResult res;
    res.disk = sd;
    TriMesh& m = res.disk.mesh;
    double area = m.area();
    res.area_log.push_back(area);
    std::vector<double> vertex_area(nv);
    auto update_vertex_area = [&] {
        std::fill(vertex_area.begin(), vertex_area.end(), 0.0);
        for (std::size_t f = 0; f < m.faces.size(); ++f) {
            const double a = m.triangle_area(f) / 3.0;
            for (auto v : m.faces[f]) vertex_area[v] += a;
        }
    };
    update_vertex_area();
    double tau = std::accumulate(vertex_area.begin(), vertex_area.end(), 0.0) / static_cast<double>(nv);
    const double tau_floor = 1e-14 * tau;
    std::size_t stalled = 0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        const auto g = area_gradient(m);
        std::vector<Vec3> d(nv, Vec3::Zero());
        double slope = 0.0;
        for (std::size_t v = 0; v < nv; ++v) {
            if (fixed[v] || vertex_area[v] <= 0.0) continue;
            d[v] = -g[v] / vertex_area[v];
            slope += g[v].dot(d[v]);
        }
        if (-slope <= 1e-30) {
            res.converged = true;
            break;
        }
        const auto old = m.vertices;
        const bool check_embedding = opt.intersection_check_every > 0 && (it + 1) % opt.intersection_check_every == 0;
        bool accepted = false;
        double trial_area = area;
        while (tau >= tau_floor) {
            for (std::size_t v = 0; v < nv; ++v) m.vertices[v] = old[v] + tau * d[v];
            trial_area = m.area();
            if (trial_area <= area + opt.armijo * tau * slope && min_angle_deg(m) >= opt.min_angle_deg &&
                (!check_embedding || improper_triangle_pairs(m, tol, true) == 0)) {
                accepted = true;
                break;
            }
            tau *= 0.5;
            ++res.step_halvings;
        }
        if (!accepted) {
            m.vertices = old;
            res.converged = true;
            break;
        }
        ++res.iterations;
        res.step_log.push_back(tau);
        res.area_log.push_back(trial_area);
        stalled = (area - trial_area) <= opt.rel_tol * area ? stalled + 1 : 0;
        area = trial_area;
        update_vertex_area();
        tau *= 2.0;
        if (stalled >= 5) {
            res.converged = true;
            break;
        }
    }
    return res;
}

double boundary_length(const SpanningDisk& sd) {
    double l = 0.0;
    const auto& b = sd.boundary;
    for (std::size_t i = 0; i < b.size(); ++i) {
        l += (sd.mesh.vertices[b[(i + 1) % b.size()]] - sd.mesh.vertices[b[i]]).norm();
    }
    return l;
}

double isoperimetric_ratio(const SpanningDisk& sd) {
    const double l = boundary_length(sd);
    if (!(l > 0)) throw InputError("disks", "disk has no boundary loop");
    return 4.0 * M_PI * mesh_area(sd) / (l * l);
}

TriMesh polar_disk(double radius, std::size_t rings) {
    if (rings == 0 || !(radius > 0)) throw InputError("disks", "polar_disk needs rings >= 1 and radius > 0");
    TriMesh m;
    m.vertices.emplace_back(0, 0, 0);
    std::vector<std::size_t> prev{0};
    for (std::size_t k = 1; k <= rings; ++k) {
        const std::size_t count = 6 * k;
        std::vector<std::size_t> ring;
        for (std::size_t j = 0; j < count; ++j) {
            const double phi = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(count);
            const double r = radius * static_cast<double>(k) / static_cast<double>(rings);
            ring.push_back(m.vertices.size());
            m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi), 0.0);
        }
        if (prev.size() == 1) {
            for (std::size_t j = 0; j < count; ++j) m.faces.push_back({prev[0], ring[j], ring[(j + 1) % count]});
        } else {
            // Merge the two rings by angle.
            const std::size_t pc = prev.size();
            std::size_t i = 0, j = 0;
            while (i < pc || j < count) {
                const double ai = static_cast<double>(i + 1) / static_cast<double>(pc);
                const double aj = static_cast<double>(j + 1) / static_cast<double>(count);
                if (j < count && (i == pc || aj <= ai)) {
                    m.faces.push_back({prev[i % pc], ring[j], ring[(j + 1) % count]});
                    ++j;
                } else {
                    m.faces.push_back({prev[i % pc], ring[j % count], prev[(i + 1) % pc]});
                    ++i;
                }
            }
        }
        prev = std::move(ring);
    }
    return m;
}

TriMesh cone_disk(double radius, double height, std::size_t rings) {
    TriMesh m = polar_disk(radius, rings);
    for (auto& p : m.vertices) p.z() = height * (1.0 - std::hypot(p.x(), p.y()) / radius);
    return m;
}

TriMesh wavy_disk(double radius, double amp, std::size_t rings) {
    TriMesh m = polar_disk(radius, rings);
    for (auto& p : m.vertices) {
        const double rho = std::hypot(p.x(), p.y()) / radius, phi = std::atan2(p.y(), p.x());
        p.z() = amp * std::sin(2.0 * M_PI * rho) * std::sin(3.0 * phi) * std::cos(M_PI * rho / 2.0);
    }
    return m;
}

TriMesh folded_sheet(std::size_t folds, double gap, double fold_x, std::size_t res) {
    if (folds == 0 || !(gap > 0) || !(fold_x > 0 && fold_x < 1) || res < 4) {
        throw InputError("disks", "folded_sheet needs folds >= 1, gap > 0, 0 < fold_x < 1, res >= 4");
    }
    // Profile in the xy-plane, layers y_k joined by half circles.
    std::vector<Point2> path;
    const double y0 = -0.5 * gap * static_cast<double>(folds - 1);
    const std::size_t per_unit = res / 2;
    auto run = [&](double xa, double xb, double y) {
        const auto steps = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(std::abs(xb - xa) * per_unit)));
        for (std::size_t s = path.empty() ? 0 : 1; s <= steps; ++s) {
            path.emplace_back(xa + (xb - xa) * static_cast<double>(s) / static_cast<double>(steps), y);
        }
    };
    double x = -1.0;
    for (std::size_t k = 0; k < folds; ++k) {
        const double y = y0 + gap * static_cast<double>(k);
        const bool last = k + 1 == folds;
        const double side = (k % 2 == 0) ? 1.0 : -1.0;
        const double xe = last ? side : side * fold_x;
        run(x, xe, y);
        x = xe;
        if (!last) {
            const double cy = y + 0.5 * gap;
            for (int s = 1; s < 8; ++s) {
                const double a = -0.5 * M_PI + M_PI * s / 8.0;
                path.emplace_back(xe + side * 0.5 * gap * std::cos(a), cy + 0.5 * gap * std::sin(a));
            }
        }
    }
    TriMesh m;
    const std::size_t nz = res;
    for (const auto& q : path) {
        for (std::size_t k = 0; k <= nz; ++k) {
            m.vertices.emplace_back(q.x(), q.y(), -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(nz));
        }
    }
    auto id = [&](std::size_t i, std::size_t k) { return i * (nz + 1) + k; };
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        for (std::size_t k = 0; k < nz; ++k) {
            m.faces.push_back({id(i, k), id(i + 1, k), id(i + 1, k + 1)});
            m.faces.push_back({id(i, k), id(i + 1, k + 1), id(i, k + 1)});
        }
    }
    return m;
}

nlohmann::json to_json(const DiskReport& r) {
    return {{"ok", r.ok()},
            {"checks",
             {{"connected", r.connected},
              {"euler", r.euler},
              {"single_boundary", r.single_boundary},
              {"orientable", r.orientable},
              {"edge_manifold", r.edge_manifold},
              {"embedded", r.embedded},
              {"boundary_on_target", r.boundary_on_target}}},
            {"euler_characteristic", r.euler_characteristic},
            {"boundary_components", r.boundary_components},
            {"improper_pairs", r.improper_pairs}};
}

nlohmann::json to_json(const AreaCertificate& c) {
    return {{"r0", c.r0},
            {"resolution", c.resolution},
            {"certified_lower_bound", c.certified_lower_bound},
            {"refined_bound", c.refined_bound},
            {"extrapolated", c.extrapolated},
            {"c7_reference", c.c7_reference},
            {"mesh_area", c.mesh_area},
            {"min_multiplicity", c.min_multiplicity},
            {"max_multiplicity", c.max_multiplicity},
            {"jitters", c.jitters},
            {"sound", c.sound}};
}

nlohmann::json to_json(const MinimizeResult& r) {
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"step_halvings", r.step_halvings},
            {"initial_area", r.area_log.front()},
            {"final_area", r.area_log.back()},
            {"isoperimetric_ratio", r.disk.boundary.empty() ? 0.0 : isoperimetric_ratio(r.disk)},
            {"area_log", r.area_log}};
}

}  // namespace knotspan::disks
