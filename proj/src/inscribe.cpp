#include "knotspan/inscribe.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace knotspan::inscribe {

using nlohmann::json;

SampledCurve InscribedPolygon::arc(std::size_t j) const {
    const double step = base.total_length / static_cast<double>(n);
    return base.sub_arc(s_values[j], s_values[j] + step);
}

double Cone::b() const { return std::tan(half_angle); }

Point2 Cone::local(const Point3& p) const {
    const Vec3 v = p - apex;
    const double t = v.dot(axis_dir);
    return {t, (v - t * axis_dir).norm()};
}

bool Cone::contains(const Point3& p, double eps) const {
    const Point2 q = local(p);
    if (q.x() < -eps || q.x() > h + eps) return false;
    return q.y() <= b() * std::max(q.x(), 0.0) + eps;
}

double Cone::distance(const Point3& p) const {
    const Point2 q = local(p);
    const Point2 o(0, 0), e(h, 0), rim(h, b() * h);
    if (q.x() >= 0 && q.x() <= h && q.y() <= b() * q.x()) return 0.0;
    return std::min({geom::point_segment_distance_2d(q, o, e), geom::point_segment_distance_2d(q, e, rim),
                     geom::point_segment_distance_2d(q, o, rim)});
}

double theta(double a) { return 2.0 * std::asin(0.5 * a); }

InscribedPolygon inscribe_polygon_uniform(const SampledCurve& c, double r, std::size_t n) {
    if (!c.closed) throw InputError("inscribe", "curve must be closed");
    if (n < 3) throw InputError("inscribe", "need at least 3 vertices");
    if (!(r > 0)) throw InputError("inscribe", "r must be positive");
    InscribedPolygon ip;
    ip.base = c;
    ip.r = r;
    ip.n = n;
    const double L = c.total_length;
    const double step = L / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = c.arclength.front() + step * static_cast<double>(j);
        ip.s_values.push_back(s);
        ip.vertices.push_back(c.point_at(s));
        ip.a_values.push_back(step / r);
    }
    return ip;
}

InscribedPolygon inscribe_polygon(const SampledCurve& c, double r, const Tolerance& tol) {
    c.validate(tol);
    const double L = c.total_length;
    if (!(L / r > 1.0)) throw InputError("inscribe", "need L/r > 1");
    const auto th = curves::thickness(c, tol);
    if (r > th.r * (1.0 + 1e-6)) {
        throw Error("inscribe", "r = " + std::to_string(r) + " exceeds measured thickness " + std::to_string(th.r));
    }
    const auto n = static_cast<std::size_t>(std::floor(32.0 * L / r)) + 1;
    auto ip = inscribe_polygon_uniform(c, r, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double a = ip.a_values[j];
        if (a < 1.0 / 33.0 || a > 1.0 / 32.0) {
            throw Error("inscribe", "a_" + std::to_string(j) + " = " + std::to_string(a) + " outside [1/33, 1/32]");
        }
    }
    const double step = L / static_cast<double>(n);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.gap(i) > 0.25 * step) {
            throw Error("inscribe", "sampling too coarse: gap after sample " + std::to_string(i) +
                                        " longer than a quarter of an arc");
        }
    }
    if (!curves::is_embedded(ip.polygon(), tol)) throw Error("inscribe", "inscribed polygon not embedded");
    return ip;
}

namespace {

bool in_infinite_cone(const Point3& p, const Point3& apex, const Vec3& axis, double half, double eps) {
    const Vec3 v = p - apex;
    const double t = v.dot(axis);
    const double rho = (v - t * axis).norm();
    if (v.norm() <= eps) return true;
    return rho <= std::tan(half) * t + eps && t >= -eps;
}

double arc_a(const SampledCurve& arc, double r) { return arc.total_length / r; }

}  // namespace

ConeLemmaReport verify_cone_lemma(const SampledCurve& arc, double r, const Tolerance& tol) {
    ConeLemmaReport rep;
    rep.a = arc_a(arc, r);
    if (!(rep.a > 0.0) || rep.a > 1.0 + 1e-12) throw InputError("inscribe", "cone lemma needs a in (0, 1]");
    const auto k = curves::curvature_profile(arc);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] > (1.0 / r) * (1.0 + 1e-6)) {
            throw Error("inscribe", "curvature " + std::to_string(k[i]) + " above 1/r at sample " + std::to_string(i));
        }
    }
    rep.theta_a = theta(rep.a);
    const auto t = curves::tangent_profile(arc);
    for (const auto& ti : t) {
        rep.max_tangent_angle = std::max(rep.max_tangent_angle, std::acos(std::clamp(ti.dot(t[0]), -1.0, 1.0)));
    }
    rep.angle_ok = rep.max_tangent_angle <= rep.theta_a + tol.eps_ang;
    rep.containment = true;
    for (const auto& p : arc.samples) {
        if (!in_infinite_cone(p, arc.samples.front(), t[0], rep.theta_a + tol.eps_ang, tol.eps_len)) {
            rep.containment = false;
            break;
        }
    }
    return rep;
}

ChordBoundReport verify_chord_bound(const SampledCurve& arc, double r, const Tolerance& tol) {
    ChordBoundReport rep;
    rep.a = arc_a(arc, r);
    if (!(rep.a > 0.0) || rep.a >= 0.5) throw InputError("inscribe", "chord bound needs a in (0, 1/2)");
    const Vec3 chord = arc.samples.back() - arc.samples.front();
    rep.ratio = chord.squaredNorm() / (arc.total_length * arc.total_length);
    const double th = theta(rep.a);
    rep.bound = std::cos(2.0 * th);
    rep.ratio_ok = rep.ratio >= rep.bound;
    const Vec3 axis = chord.normalized();
    rep.in_cone = true;
    for (const auto& p : arc.samples) {
        if (!in_infinite_cone(p, arc.samples.front(), axis, 2.0 * th + tol.eps_ang, tol.eps_len)) {
            rep.in_cone = false;
            break;
        }
    }
    return rep;
}

std::vector<Cone> necklace_cones(const InscribedPolygon& ip, double angle_factor) {
    std::vector<Cone> cones;
    cones.reserve(ip.n);
    for (std::size_t j = 0; j < ip.n; ++j) {
        const auto e = ip.edge(j);
        Cone c;
        c.apex = e.a;
        c.h = (e.b - e.a).norm();
        c.axis_dir = (e.b - e.a) / c.h;
        c.half_angle = angle_factor * theta(ip.a_values[j]);
        c.base_center = e.b;
        if (!(c.half_angle > 0.0 && c.half_angle < M_PI / 2)) {
            throw Error("inscribe", "cone " + std::to_string(j) + " half-angle outside (0, pi/2)");
        }
        cones.push_back(c);
    }
    return cones;
}

namespace {

std::pair<Vec3, Vec3> frame(const Vec3& u) {
    const Vec3 seed = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = u.cross(seed).normalized();
    return {e1, u.cross(e1)};
}

constexpr int kAzimuths = 64;
constexpr int kHeights = 32;
constexpr int kRings = 8;

// Min distance from sampled boundary of `a` to solid `b`, less the
// sampling resolution of `a`.
double one_way(const Cone& a, const Cone& b) {
    const auto [e1, e2] = frame(a.axis_dir);
    const double R = a.base_radius();
    double best = std::min(b.distance(a.apex), b.distance(a.base_center));
    for (int k = 0; k < kAzimuths; ++k) {
        const double phi = 2.0 * M_PI * k / kAzimuths;
        const Vec3 dir = std::cos(phi) * e1 + std::sin(phi) * e2;
        for (int i = 1; i < kHeights; ++i) {
            const double t = a.h * i / (kHeights - 1);
            best = std::min(best, b.distance(a.apex + t * a.axis_dir + (a.b() * t) * dir));
        }
        for (int m = 1; m < kRings; ++m) {
            best = std::min(best, b.distance(a.base_center + (R * m / kRings) * dir));
        }
    }
    const double slant = a.h * std::sqrt(1.0 + a.b() * a.b());
    const double resolution =
        std::max({slant / (kHeights - 1), 2.0 * M_PI * R / kAzimuths, R / kRings});
    return best - resolution;
}

}  // namespace

double cone_separation(const Cone& c1, const Cone& c2) {
    auto sphere = [](const Cone& c) {
        return std::pair{c.apex + 0.5 * c.h * c.axis_dir, std::hypot(0.5 * c.h, c.base_radius())};
    };
    const auto [m1, r1] = sphere(c1);
    const auto [m2, r2] = sphere(c2);
    const double gap = (m1 - m2).norm() - r1 - r2;
    if (gap > 0.0) return gap;
    return std::min(one_way(c1, c2), one_way(c2, c1));
}

NecklaceReport check_necklace(const InscribedPolygon& ip, const std::vector<Cone>& cones,
                              const Tolerance& tol, bool stop_at_first) {
    NecklaceReport rep;
    const std::size_t n = cones.size();
    rep.cones = n;
    rep.min_nonadjacent_distance = std::numeric_limits<double>::infinity();
    auto flag = [&](long i, long j) {
        if (rep.first_bad_i < 0) {
            rep.first_bad_i = i;
            rep.first_bad_j = j;
        }
    };
    for (std::size_t j = 0; j < n; ++j) {
        const Cone& c = cones[j];
        rep.max_base_diameter = std::max(rep.max_base_diameter, 2.0 * c.base_radius());
        const auto arc = ip.arc(j);
        const double eps = tol.eps_len + 1e-12 * c.h;
        bool inside = true;
        for (std::size_t i = 0; i < arc.size() && inside; ++i) {
            inside = c.contains(arc.samples[i], eps);
            if (inside && i + 1 < arc.size()) inside = c.contains(0.5 * (arc.samples[i] + arc.samples[i + 1]), eps);
        }
        if (!inside) {
            ++rep.containment_failures;
            flag(static_cast<long>(j), static_cast<long>(j));
            if (stop_at_first) return rep;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const bool adjacent = (k == j + 1) || (j == 0 && k == n - 1);
            if (adjacent) {
                // The later cone must open strictly ahead of the base plane
                // of the earlier one; then they share only the vertex.
                const std::size_t first = (k == j + 1) ? j : k;
                const std::size_t second = (k == j + 1) ? k : j;
                const double turn = std::acos(std::clamp(cones[first].axis_dir.dot(cones[second].axis_dir), -1.0, 1.0));
                if (!(turn + cones[second].half_angle < M_PI / 2 - tol.eps_ang)) {
                    ++rep.adjacency_failures;
                    flag(static_cast<long>(first), static_cast<long>(second));
                    if (stop_at_first) return rep;
                }
                continue;
            }
            ++rep.pairs_checked;
            const double d = cone_separation(cones[j], cones[k]);
            rep.min_nonadjacent_distance = std::min(rep.min_nonadjacent_distance, d);
            if (!(d > tol.eps_len)) {
                ++rep.disjointness_failures;
                flag(static_cast<long>(j), static_cast<long>(k));
                if (stop_at_first) return rep;
            }
        }
    }
    return rep;
}

std::vector<Cone> build_cone_necklace(const InscribedPolygon& ip, const Tolerance& tol, double angle_factor) {
    auto cones = necklace_cones(ip, angle_factor);
    const auto rep = check_necklace(ip, cones, tol, true);
    if (!rep.ok()) {
        const char* what = rep.containment_failures ? "arc not contained in cone"
                           : rep.adjacency_failures ? "adjacent cones overlap beyond the shared vertex"
                                                    : "non-adjacent cones intersect";
        throw Error("inscribe", std::string(what) + " at (" + std::to_string(rep.first_bad_i) + ", " +
                                    std::to_string(rep.first_bad_j) + ")");
    }
    return cones;
}

json to_json(const Cone& c) {
    return {{"apex", {c.apex.x(), c.apex.y(), c.apex.z()}},
            {"axis", {c.axis_dir.x(), c.axis_dir.y(), c.axis_dir.z()}},
            {"h", c.h},
            {"half_angle", c.half_angle}};
}

json to_json(const std::vector<Cone>& cones) {
    json arr = json::array();
    for (const auto& c : cones) arr.push_back(to_json(c));
    return arr;
}

json to_json(const NecklaceReport& r) {
    return {{"cones", r.cones},
            {"containment_failures", r.containment_failures},
            {"disjointness_failures", r.disjointness_failures},
            {"adjacency_failures", r.adjacency_failures},
            {"pairs_checked", r.pairs_checked},
            {"min_nonadjacent_distance", r.min_nonadjacent_distance},
            {"max_base_diameter", r.max_base_diameter},
            {"ok", r.ok()}};
}

}  // namespace knotspan::inscribe
