#include "knotspan/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace knotspan {

void Tolerance::validate() const {
    if (!(eps_len > 0.0) || !(eps_ang > 0.0)) {
        throw InputError("tolerance", "eps_len and eps_ang must be strictly positive");
    }
}

namespace geom {

const char* to_string(TriTriClass c) {
    switch (c) {
        case TriTriClass::Disjoint: return "disjoint";
        case TriTriClass::SharedVertex: return "shared-vertex";
        case TriTriClass::SharedEdge: return "shared-edge";
        case TriTriClass::Improper: return "improper";
    }
    return "?";
}

bool is_finite(const Point3& p) {
    return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

// Ericson, Real-Time Collision Detection, 5.1.9.
std::pair<double, double> closest_segment_params(const Segment& s1, const Segment& s2) {
    const Vec3 d1 = s1.b - s1.a;
    const Vec3 d2 = s2.b - s2.a;
    const Vec3 r = s1.a - s2.a;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    constexpr double tiny = 1e-300;
    if (a <= tiny && e <= tiny) return {0.0, 0.0};
    if (a <= tiny) return {0.0, std::clamp(f / e, 0.0, 1.0)};
    const double c = d1.dot(r);
    if (e <= tiny) return {std::clamp(-c / a, 0.0, 1.0), 0.0};
    const double b = d1.dot(d2);
    const double denom = a * e - b * b;
    double s = 0.0;
    if (denom > 1e-14 * a * e) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return {s, t};
}

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b) {
    const Vec3 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

double point_segment_distance_2d(const Point2& p, const Point2& a, const Point2& b) {
    const Point2 d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

namespace {

double one_sided_distance(const Segment& s1, const Segment& s2) {
    const auto [s, t] = closest_segment_params(s1, s2);
    double best = ((s1.a + s * (s1.b - s1.a)) - (s2.a + t * (s2.b - s2.a))).norm();
    best = std::min(best, point_segment_distance(s1.a, s2.a, s2.b));
    best = std::min(best, point_segment_distance(s1.b, s2.a, s2.b));
    best = std::min(best, point_segment_distance(s2.a, s1.a, s1.b));
    best = std::min(best, point_segment_distance(s2.b, s1.a, s1.b));
    return best;
}

}  // namespace

double segment_distance(const Segment& s1, const Segment& s2, const Tolerance& tol) {
    if ((s1.b - s1.a).norm() <= tol.eps_len || (s2.b - s2.a).norm() <= tol.eps_len) {
        throw InputError("geom", "degenerate segment (coincident endpoints)");
    }
    // Canonical endpoint order plus both argument orders makes the result
    // exactly symmetric.
    auto canon = [](const Segment& s) {
        const bool swap = std::lexicographical_compare(s.b.data(), s.b.data() + 3, s.a.data(), s.a.data() + 3);
        return swap ? Segment{s.b, s.a} : s;
    };
    const Segment c1 = canon(s1), c2 = canon(s2);
    return std::min(one_sided_distance(c1, c2), one_sided_distance(c2, c1));
}

double cross2(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient2d(const Point2& a, const Point2& b, const Point2& c) {
    return cross2(b - a, c - a);
}

std::vector<std::size_t> convex_hull_2d_indices(std::span<const Point2> points,
                                                const Tolerance& tol) {
    if (points.size() < 3) throw InputError("geom", "convex hull needs at least 3 points");
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        if (points[i].x() != points[j].x()) return points[i].x() < points[j].x();
        if (points[i].y() != points[j].y()) return points[i].y() < points[j].y();
        return i < j;
    });
    const double first_to_last = (points[idx.back()] - points[idx.front()]).norm();
    if (first_to_last <= tol.eps_len) {
        throw InputError("geom", "convex hull degenerate: all points coincident");
    }
    // A turn counts as left only when the triangle height exceeds eps_len.
    auto left_turn = [&](std::size_t o, std::size_t a, std::size_t b) {
        const double base = (points[b] - points[o]).norm();
        return orient2d(points[o], points[a], points[b]) > tol.eps_len * std::max(base, 1e-300);
    };
    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i : idx) {
        while (k >= 2 && !left_turn(hull[k - 2], hull[k - 1], i)) --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (std::size_t ii = idx.size() - 1; ii-- > 0;) {
        const std::size_t i = idx[ii];
        while (k >= lower && !left_turn(hull[k - 2], hull[k - 1], i)) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) {
        throw InputError("geom", "convex hull degenerate: all points collinear");
    }
    return hull;
}

std::vector<Point2> convex_hull_2d(std::span<const Point2> points, const Tolerance& tol) {
    std::vector<Point2> out;
    for (std::size_t i : convex_hull_2d_indices(points, tol)) out.push_back(points[i]);
    return out;
}

double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

bool segments_intersect_2d(const Point2& a, const Point2& b, const Point2& c, const Point2& d,
                           double eps) {
    const double d1 = orient2d(c, d, a);
    const double d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c);
    const double d4 = orient2d(a, b, d);
    const double lab = std::max((b - a).norm(), 1e-300);
    const double lcd = std::max((d - c).norm(), 1e-300);
    // Heights above the opposite line, in length units.
    const double h1 = d1 / lcd, h2 = d2 / lcd, h3 = d3 / lab, h4 = d4 / lab;
    if (((h1 > eps && h2 < -eps) || (h1 < -eps && h2 > eps)) &&
        ((h3 > eps && h4 < -eps) || (h3 < -eps && h4 > eps))) {
        return true;
    }
    return point_segment_distance_2d(a, c, d) <= eps || point_segment_distance_2d(b, c, d) <= eps ||
           point_segment_distance_2d(c, a, b) <= eps || point_segment_distance_2d(d, a, b) <= eps;
}

bool point_in_triangle_2d(const Point2& p, const Point2& a, const Point2& b, const Point2& c,
                          double eps) {
    const double area = orient2d(a, b, c);
    const double sgn = area >= 0 ? 1.0 : -1.0;
    auto height = [&](const Point2& u, const Point2& v) {
        return sgn * orient2d(u, v, p) / std::max((v - u).norm(), 1e-300);
    };
    return height(a, b) >= -eps && height(b, c) >= -eps && height(c, a) >= -eps;
}

namespace {

Vec3 unit_normal(const Triangle& t) { return (t[1] - t[0]).cross(t[2] - t[0]).normalized(); }

// Signed distances of a point to the triangle edges' lines within its plane
// (positive toward the interior).
bool point_in_triangle_3d(const Point3& x, const Triangle& t, const Vec3& n, double eps) {
    for (int k = 0; k < 3; ++k) {
        const Point3& a = t[k];
        const Point3& b = t[(k + 1) % 3];
        const Vec3 inward = n.cross(b - a).normalized();
        if ((x - a).dot(inward) < -eps) return false;
    }
    return true;
}

// Projects onto the coordinate plane best aligned with n.
Point2 drop_axis(const Point3& p, int axis) {
    if (axis == 0) return {p.y(), p.z()};
    if (axis == 1) return {p.z(), p.x()};
    return {p.x(), p.y()};
}

int dominant_axis(const Vec3& n) {
    int axis = 0;
    n.cwiseAbs().maxCoeff(&axis);
    return axis;
}

bool coplanar_triangles_overlap(const Triangle& t1, const Triangle& t2, const Vec3& n, double eps) {
    const int axis = dominant_axis(n);
    std::array<Point2, 3> a, b;
    for (int k = 0; k < 3; ++k) {
        a[k] = drop_axis(t1[k], axis);
        b[k] = drop_axis(t2[k], axis);
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3], eps)) return true;
        }
    }
    if (point_in_triangle_2d(a[0], b[0], b[1], b[2], eps)) return true;
    if (point_in_triangle_2d(b[0], a[0], a[1], a[2], eps)) return true;
    return false;
}

// Direction u lies in the closed wedge spanned at the apex by unit vectors
// ea, eb (counterclockwise about n).
bool in_wedge(const Vec3& ea, const Vec3& eb, const Vec3& n, const Vec3& u, double eps_ang) {
    if (u.dot(ea + eb) <= 0.0) return false;
    return ea.cross(u).dot(n) >= -eps_ang && u.cross(eb).dot(n) >= -eps_ang;
}

}  // namespace

bool segment_intersects_triangle(const Point3& p, const Point3& q, const Triangle& t, double eps) {
    const Vec3 n = unit_normal(t);
    const double dp = (p - t[0]).dot(n);
    const double dq = (q - t[0]).dot(n);
    if (std::abs(dp) <= eps && std::abs(dq) <= eps) {
        const int axis = dominant_axis(n);
        const Point2 p2 = drop_axis(p, axis), q2 = drop_axis(q, axis);
        std::array<Point2, 3> tt;
        for (int k = 0; k < 3; ++k) tt[k] = drop_axis(t[k], axis);
        if (point_in_triangle_2d(p2, tt[0], tt[1], tt[2], eps)) return true;
        for (int k = 0; k < 3; ++k) {
            if (segments_intersect_2d(p2, q2, tt[k], tt[(k + 1) % 3], eps)) return true;
        }
        return false;
    }
    if ((dp > eps && dq > eps) || (dp < -eps && dq < -eps)) return false;
    Point3 x;
    if (std::abs(dp) <= eps) {
        x = p;
    } else if (std::abs(dq) <= eps) {
        x = q;
    } else {
        x = p + (dp / (dp - dq)) * (q - p);
    }
    return point_in_triangle_3d(x, t, n, eps);
}

TriTriClass triangle_triangle_intersect(const Triangle& t1, const Triangle& t2,
                                        const Tolerance& tol) {
    const double eps = tol.eps_len;
    if (triangle_area(t1[0], t1[1], t1[2]) <= eps * eps ||
        triangle_area(t2[0], t2[1], t2[2]) <= eps * eps) {
        throw InputError("geom", "degenerate triangle");
    }
    // match[i] = index in t2 of the vertex coinciding with t1[i], or -1.
    std::array<int, 3> match{-1, -1, -1};
    int shared = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if ((t1[i] - t2[j]).norm() <= eps) {
                match[i] = j;
                ++shared;
                break;
            }
        }
    }
    const Vec3 n1 = unit_normal(t1);
    const Vec3 n2 = unit_normal(t2);
    auto coplanar = [&]() {
        for (int k = 0; k < 3; ++k) {
            if (std::abs((t2[k] - t1[0]).dot(n1)) > eps) return false;
            if (std::abs((t1[k] - t2[0]).dot(n2)) > eps) return false;
        }
        return true;
    };

    if (shared == 3) return TriTriClass::Improper;

    if (shared == 2) {
        int c1 = 0;
        while (match[c1] != -1) ++c1;
        int c2 = 0;
        while (c2 == match[0] || c2 == match[1] || c2 == match[2]) ++c2;
        const Point3& apex1 = t1[c1];
        const Point3& apex2 = t2[c2];
        if (std::abs((apex2 - t1[0]).dot(n1)) > eps) return TriTriClass::SharedEdge;
        // Coplanar: proper only when the free vertices lie on opposite sides.
        const Point3& a = t1[(c1 + 1) % 3];
        const Point3& b = t1[(c1 + 2) % 3];
        const double s1 = (b - a).cross(apex1 - a).dot(n1);
        const double s2 = (b - a).cross(apex2 - a).dot(n1);
        return (s1 * s2 < 0.0) ? TriTriClass::SharedEdge : TriTriClass::Improper;
    }

    if (shared == 1) {
        int i = 0;
        while (match[i] == -1) ++i;
        const int j = match[i];
        const Point3 p = t1[i];
        const Vec3 a1 = (t1[(i + 1) % 3] - p).normalized();
        const Vec3 b1 = (t1[(i + 2) % 3] - p).normalized();
        Vec3 a2 = (t2[(j + 1) % 3] - p).normalized();
        Vec3 b2 = (t2[(j + 2) % 3] - p).normalized();
        const Vec3 u_raw = n1.cross(n2);
        if (!coplanar() && u_raw.norm() > tol.eps_ang) {
            const Vec3 u = u_raw.normalized();
            auto side = [&](const Vec3& ea, const Vec3& eb, const Vec3& n) {
                if (in_wedge(ea, eb, n, u, tol.eps_ang)) return 1;
                if (in_wedge(ea, eb, n, -u, tol.eps_ang)) return -1;
                return 0;
            };
            const int s1 = side(a1, b1, n1);
            const int s2 = side(a2, b2, n2);
            return (s1 != 0 && s1 == s2) ? TriTriClass::Improper : TriTriClass::SharedVertex;
        }
        // Coplanar wedges at the shared apex: compare angular intervals.
        if (n2.dot(n1) < 0.0) std::swap(a2, b2);
        const Vec3 e1 = a1;
        const Vec3 e2 = n1.cross(e1);
        auto angle = [&](const Vec3& v) { return std::atan2(v.dot(e2), v.dot(e1)); };
        const double w1 = std::atan2(a1.cross(b1).dot(n1), a1.dot(b1));
        double start2 = angle(a2);
        if (start2 < 0) start2 += 2.0 * M_PI;
        const double w2 = std::atan2(a2.cross(b2).dot(n1), a2.dot(b2));
        // Interval 1 = [0, w1], interval 2 = [start2, start2 + w2] modulo 2pi.
        const double e = tol.eps_ang;
        const bool disjoint = (start2 > w1 + e) && (start2 + w2 < 2.0 * M_PI - e);
        return disjoint ? TriTriClass::SharedVertex : TriTriClass::Improper;
    }

    if (coplanar()) {
        return coplanar_triangles_overlap(t1, t2, n1, eps) ? TriTriClass::Improper
                                                           : TriTriClass::Disjoint;
    }
    for (int k = 0; k < 3; ++k) {
        if (segment_intersects_triangle(t1[k], t1[(k + 1) % 3], t2, eps)) return TriTriClass::Improper;
        if (segment_intersects_triangle(t2[k], t2[(k + 1) % 3], t1, eps)) return TriTriClass::Improper;
    }
    return TriTriClass::Disjoint;
}

std::vector<std::array<std::size_t, 3>> triangulate_polygon(std::span<const Point2> poly,
                                                            double eps) {
    const std::size_t n = poly.size();
    if (n < 3) throw Error("geom", "polygon with fewer than 3 vertices");
    std::vector<std::array<std::size_t, 3>> tris;

    auto turn = [&](std::size_t a, std::size_t b, std::size_t c) {
        const double la = (poly[b] - poly[a]).norm();
        const double lb = (poly[c] - poly[b]).norm();
        return orient2d(poly[a], poly[b], poly[c]) / std::max(la * lb, 1e-300);
    };

    bool convex = true;
    for (std::size_t i = 0; i < n && convex; ++i) {
        if (turn(i, (i + 1) % n, (i + 2) % n) <= 1e-12) convex = false;
    }
    if (convex) {
        for (std::size_t i = 1; i + 1 < n; ++i) tris.push_back({0, i, i + 1});
        return tris;
    }

    std::vector<std::size_t> ring(n);
    std::iota(ring.begin(), ring.end(), 0);
    while (ring.size() > 3) {
        const std::size_t m = ring.size();
        bool clipped = false;
        for (std::size_t k = 0; k < m && !clipped; ++k) {
            const std::size_t ia = ring[(k + m - 1) % m];
            const std::size_t ib = ring[k];
            const std::size_t ic = ring[(k + 1) % m];
            if (turn(ia, ib, ic) <= 1e-12) continue;
            bool blocked = false;
            for (std::size_t other : ring) {
                if (other == ia || other == ib || other == ic) continue;
                const Point2& p = poly[other];
                if ((p - poly[ia]).norm() <= eps || (p - poly[ib]).norm() <= eps ||
                    (p - poly[ic]).norm() <= eps) {
                    continue;
                }
                if (point_in_triangle_2d(p, poly[ia], poly[ib], poly[ic], eps)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({ia, ib, ic});
            ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(k));
            clipped = true;
        }
        if (!clipped) throw Error("geom", "ear clipping failed: polygon not simple");
    }
    if (turn(ring[0], ring[1], ring[2]) <= 1e-12) {
        throw Error("geom", "ear clipping left a degenerate triangle");
    }
    tris.push_back({ring[0], ring[1], ring[2]});
    return tris;
}

}  // namespace geom
}  // namespace knotspan
