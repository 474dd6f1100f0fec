#include "knotspan/curves.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace knotspan::curves {

using nlohmann::json;

void PolygonalCurve::validate(const Tolerance& tol) const {
    if (vertices.size() < 3) throw InputError("curves", "polygon needs at least 3 vertices");
    for (const auto& v : vertices) {
        if (!geom::is_finite(v)) throw InputError("curves", "non-finite vertex coordinate");
    }
    for (std::size_t i = 0; i < edge_count(); ++i) {
        const auto e = edge(i);
        if ((e.b - e.a).norm() <= tol.eps_len) {
            throw InputError("curves", "consecutive vertices coincide at index " + std::to_string(i));
        }
    }
}

SampledCurve SampledCurve::from_points(std::vector<Point3> points, bool closed) {
    SampledCurve c;
    c.closed = closed;
    c.samples = std::move(points);
    c.arclength.resize(c.samples.size());
    double s = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        if (i > 0) s += (c.samples[i] - c.samples[i - 1]).norm();
        c.arclength[i] = s;
    }
    if (closed && !c.samples.empty()) s += (c.samples.front() - c.samples.back()).norm();
    c.total_length = s;
    return c;
}

void SampledCurve::validate(const Tolerance& tol) const {
    if (samples.size() < 3) throw InputError("curves", "sampled curve needs at least 3 samples");
    if (arclength.size() != samples.size()) {
        throw InputError("curves", "arclength and sample counts differ");
    }
    for (const auto& p : samples) {
        if (!geom::is_finite(p)) throw InputError("curves", "non-finite sample coordinate");
    }
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(arclength[i] > arclength[i - 1] + tol.eps_len * 1e-3)) {
            throw InputError("curves", "arclength not strictly increasing at sample " + std::to_string(i));
        }
    }
    const double last = closed ? total_length - arclength.back() : total_length - arclength.back();
    if (closed ? !(last > 0.0) : last < -tol.eps_len) {
        throw InputError("curves", "total_length inconsistent with arclength values");
    }
}

double SampledCurve::gap(std::size_t i) const {
    if (i + 1 < samples.size()) return arclength[i + 1] - arclength[i];
    return total_length - arclength.back() + arclength.front();
}

bool SampledCurve::is_dense() const {
    const std::size_t gaps = closed ? samples.size() : samples.size() - 1;
    for (std::size_t i = 0; i < gaps; ++i) {
        const double g = gap(i);
        const double chord = (samples[(i + 1) % samples.size()] - samples[i]).norm();
        if (g > total_length / 500.0 * (1.0 + 1e-12)) return false;
        if (std::abs(chord - g) > 0.01 * g) return false;
    }
    return true;
}

Point3 SampledCurve::point_at(double s) const {
    const double s0 = arclength.front();
    if (closed) {
        s = std::fmod(s - s0, total_length);
        if (s < 0) s += total_length;
        s += s0;
    } else {
        s = std::clamp(s, s0, arclength.back());
    }
    auto it = std::upper_bound(arclength.begin(), arclength.end(), s);
    std::size_t i = (it == arclength.begin()) ? 0 : static_cast<std::size_t>(it - arclength.begin()) - 1;
    if (!closed && i + 1 >= samples.size()) return samples.back();
    const std::size_t j = (i + 1) % samples.size();
    const double g = gap(i);
    const double t = g > 0 ? (s - arclength[i]) / g : 0.0;
    return samples[i] + t * (samples[j] - samples[i]);
}

SampledCurve SampledCurve::sub_arc(double s0, double s1) const {
    if (!(s1 > s0)) throw InputError("curves", "sub_arc needs s1 > s0");
    SampledCurve out;
    out.closed = false;
    out.samples.push_back(point_at(s0));
    out.arclength.push_back(0.0);
    const std::size_t n = samples.size();
    // Walk forward over whole laps for closed curves.
    const double span = s1 - s0;
    for (int lap = 0; lap < 3; ++lap) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = arclength[i] + lap * (closed ? total_length : 0.0);
            const double rel = s - s0;
            if (rel > 1e-12 * total_length && rel < span - 1e-12 * total_length) {
                out.samples.push_back(samples[i]);
                out.arclength.push_back(rel);
            }
        }
        if (!closed) break;
    }
    out.samples.push_back(point_at(s1));
    out.arclength.push_back(span);
    out.total_length = span;
    return out;
}

const char* to_string(LimitingFactor f) {
    return f == LimitingFactor::Curvature ? "curvature" : "doubly_critical";
}

double length(const PolygonalCurve& c) {
    double L = 0.0;
    for (std::size_t i = 0; i < c.edge_count(); ++i) {
        const auto e = c.edge(i);
        L += (e.b - e.a).norm();
    }
    return L;
}

double length(const SampledCurve& c) { return c.total_length; }

namespace {

double circumcurvature(const Point3& a, const Point3& b, const Point3& c) {
    const double ab = (b - a).norm();
    const double bc = (c - b).norm();
    const double ca = (a - c).norm();
    const double denom = ab * bc * ca;
    if (denom == 0.0) return 0.0;
    return 2.0 * (b - a).cross(c - a).norm() / denom;
}

std::array<std::size_t, 3> triple(const SampledCurve& c, std::size_t i) {
    const std::size_t n = c.size();
    if (c.closed) return {(i + n - 1) % n, i, (i + 1) % n};
    if (i == 0) return {0, 1, 2};
    if (i == n - 1) return {n - 3, n - 2, n - 1};
    return {i - 1, i, i + 1};
}

Vec3 middle_tangent(const Point3& a, const Point3& b, const Point3& c) {
    const Vec3 u = b - a;
    const Vec3 v = c - b;
    const double lu = u.norm(), lv = v.norm();
    const Vec3 t = (lv / lu) * u + (lu / lv) * v;
    return t.normalized();
}

}  // namespace

std::vector<double> curvature_profile(const SampledCurve& c) {
    std::vector<double> k(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto [a, b, d] = triple(c, i);
        k[i] = circumcurvature(c.samples[a], c.samples[b], c.samples[d]);
    }
    return k;
}

std::vector<Vec3> tangent_profile(const SampledCurve& c) {
    const std::size_t n = c.size();
    std::vector<Vec3> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b, d] = triple(c, i);
        const Vec3 mid = middle_tangent(c.samples[a], c.samples[b], c.samples[d]);
        if (b == i) {
            t[i] = mid;
        } else if (i == a) {
            const Vec3 u = (c.samples[b] - c.samples[a]).normalized();
            t[i] = (2.0 * mid.dot(u) * u - mid).normalized();
        } else {
            const Vec3 v = (c.samples[d] - c.samples[b]).normalized();
            t[i] = (2.0 * mid.dot(v) * v - mid).normalized();
        }
    }
    return t;
}

namespace {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
        h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
        h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
        return static_cast<std::size_t>(h);
    }
};

CellKey cell_of(const Point3& p, double cell) {
    return {static_cast<std::int64_t>(std::floor(p.x() / cell)),
            static_cast<std::int64_t>(std::floor(p.y() / cell)),
            static_cast<std::int64_t>(std::floor(p.z() / cell))};
}

using Grid = std::unordered_map<CellKey, std::vector<std::size_t>, CellHash>;

}  // namespace

ThicknessReport thickness(const SampledCurve& c, const Tolerance& tol) {
    if (!c.closed) throw InputError("curves", "thickness requires a closed curve");
    c.validate(tol);
    const std::size_t n = c.size();
    const auto kappa = curvature_profile(c);
    std::size_t kmax_i = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (kappa[i] > kappa[kmax_i]) kmax_i = i;
    }
    const double kmax = kappa[kmax_i];
    if (kmax >= 1.0 / tol.eps_len) {
        throw Error("curves", "not C2-resolvable at this sampling (curvature " + std::to_string(kmax) +
                                  " at sample " + std::to_string(kmax_i) + ")");
    }
    ThicknessReport rep;
    rep.max_curvature = kmax;
    const double r_curv = kmax > 0.0 ? 1.0 / kmax : std::numeric_limits<double>::infinity();
    const double L = c.total_length;
    const double exclusion = std::min(r_curv, 0.5 * L);

    auto sep = [&](std::size_t i, std::size_t j) {
        const double d = std::abs(c.arclength[i] - c.arclength[j]);
        return std::min(d, L - d);
    };
    auto dist = [&](std::size_t i, std::size_t j) { return (c.samples[i] - c.samples[j]).norm(); };
    const auto tangents = tangent_profile(c);

    double max_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_gap = std::max(max_gap, c.gap(i));
    // Only pairs near 2 r_curv or closer can lower the thickness; the slack
    // covers grid pairs offset from a segment-refined minimum.
    const double cutoff = std::isfinite(r_curv) ? 2.0 * r_curv + 2.0 * max_gap : L;

    Grid grid;
    const double cell = std::max(cutoff, max_gap);
    for (std::size_t i = 0; i < n; ++i) grid[cell_of(c.samples[i], cell)].push_back(i);

    struct Candidate {
        double d;
        std::size_t i, j;
    };
    std::vector<Candidate> found;
    for (std::size_t i = 0; i < n; ++i) {
        const CellKey k = cell_of(c.samples[i], cell);
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
                    if (it == grid.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j <= i) continue;
                        const double dij = dist(i, j);
                        if (dij > cutoff || sep(i, j) <= exclusion) continue;
                        bool local_min = true;
                        for (int di = -1; di <= 1 && local_min; ++di) {
                            for (int dj = -1; dj <= 1; ++dj) {
                                if (di == 0 && dj == 0) continue;
                                const std::size_t a = (i + n + di) % n;
                                const std::size_t b = (j + n + dj) % n;
                                if (sep(a, b) <= exclusion || dist(a, b) < dij) {
                                    local_min = false;
                                    break;
                                }
                            }
                        }
                        if (!local_min) continue;
                        // Chord orthogonal to both tangents, up to the angular
                        // resolution of the sampling.
                        const Vec3 chord = (c.samples[j] - c.samples[i]) / dij;
                        const double h = c.gap(i) + c.gap((i + n - 1) % n) + c.gap(j) +
                                         c.gap((j + n - 1) % n);
                        const double orth_tol = std::max(tol.eps_ang, h / dij + h * kmax);
                        if (std::abs(chord.dot(tangents[i])) > orth_tol ||
                            std::abs(chord.dot(tangents[j])) > orth_tol) {
                            continue;
                        }
                        // Refine against the adjacent sample segments.
                        double best = dij;
                        for (int si = -1; si <= 0; ++si) {
                            for (int sj = -1; sj <= 0; ++sj) {
                                const std::size_t a0 = (i + n + si) % n, a1 = (a0 + 1) % n;
                                const std::size_t b0 = (j + n + sj) % n, b1 = (b0 + 1) % n;
                                const geom::Segment s1{c.samples[a0], c.samples[a1]};
                                const geom::Segment s2{c.samples[b0], c.samples[b1]};
                                const auto [u, v] = geom::closest_segment_params(s1, s2);
                                const Point3 pa = s1.a + u * (s1.b - s1.a);
                                const Point3 pb = s2.a + v * (s2.b - s2.a);
                                best = std::min(best, (pa - pb).norm());
                            }
                        }
                        found.push_back({best, i, j});
                    }
                }
            }
        }
    }
    rep.doubly_critical_candidates = found.size();
    const Candidate* win = nullptr;
    for (const auto& f : found) {
        if (!win || f.d < win->d || (f.d == win->d && (f.i < win->i || (f.i == win->i && f.j < win->j)))) {
            win = &f;
        }
    }
    rep.r = r_curv;
    rep.limiting_factor = LimitingFactor::Curvature;
    rep.witness_i = rep.witness_j = kmax_i;
    if (win) {
        rep.doubly_critical_distance = win->d;
        if (0.5 * win->d < r_curv) {
            rep.r = 0.5 * win->d;
            rep.limiting_factor = LimitingFactor::DoublyCritical;
            rep.witness_i = win->i;
            rep.witness_j = win->j;
        }
    }
    if (!std::isfinite(rep.r) || !(rep.r > 0.0)) {
        throw Error("curves", "thickness undefined for this curve");
    }
    rep.ropelength = L / rep.r;
    return rep;
}

bool max_curvature_vs_thickness_check(const SampledCurve& c, const ThicknessReport& report,
                                      double rel_tol) {
    const auto k = curvature_profile(c);
    const double kmax = *std::max_element(k.begin(), k.end());
    return kmax <= (1.0 / report.r) * (1.0 + rel_tol);
}

namespace {

// Segment i runs from vertex i to vertex i+1 (mod n for closed curves).
bool polyline_embedded(const std::vector<Point3>& v, bool closed, const Tolerance& tol) {
    const std::size_t n = v.size();
    const std::size_t m = closed ? n : n - 1;
    double max_len = 0.0;
    for (std::size_t i = 0; i < m; ++i) max_len = std::max(max_len, (v[(i + 1) % n] - v[i]).norm());
    // Adjacent segments must not fold back onto each other.
    for (std::size_t i = 0; i < m; ++i) {
        if (!closed && i + 1 >= m) break;
        const Vec3 a = (v[(i + 1) % n] - v[i]).normalized();
        const Vec3 b = (v[(i + 2) % n] - v[(i + 1) % n]).normalized();
        if (a.dot(b) < -1.0 + tol.eps_ang) return false;
    }
    // Bucket segments by the cells their bounding boxes touch.
    Grid grid;
    const double cell = std::max(max_len, 1e-12);
    std::vector<std::pair<CellKey, CellKey>> ranges(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point3 lo = v[i].cwiseMin(v[(i + 1) % n]);
        const Point3 hi = v[i].cwiseMax(v[(i + 1) % n]);
        ranges[i] = {cell_of(lo, cell), cell_of(hi, cell)};
        for (auto x = ranges[i].first.x; x <= ranges[i].second.x; ++x)
            for (auto y = ranges[i].first.y; y <= ranges[i].second.y; ++y)
                for (auto z = ranges[i].first.z; z <= ranges[i].second.z; ++z) grid[{x, y, z}].push_back(i);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const geom::Segment si{v[i], v[(i + 1) % n]};
        for (auto x = ranges[i].first.x - 1; x <= ranges[i].second.x + 1; ++x)
            for (auto y = ranges[i].first.y - 1; y <= ranges[i].second.y + 1; ++y)
                for (auto z = ranges[i].first.z - 1; z <= ranges[i].second.z + 1; ++z) {
                    auto it = grid.find({x, y, z});
                    if (it == grid.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j <= i) continue;
                        const bool adjacent = (j == i + 1) || (closed && i == 0 && j == m - 1);
                        if (adjacent) continue;
                        const geom::Segment sj{v[j], v[(j + 1) % n]};
                        if (geom::segment_distance(si, sj, tol) <= tol.eps_len) return false;
                    }
                }
    }
    return true;
}

}  // namespace

bool is_embedded(const PolygonalCurve& c, const Tolerance& tol) {
    c.validate(tol);
    return polyline_embedded(c.vertices, c.closed, tol);
}

bool is_embedded(const SampledCurve& c, const Tolerance& tol) {
    return polyline_embedded(c.samples, c.closed, tol);
}

double distance_to_y_axis(const PolygonalCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.edge_count(); ++i) {
        const auto e = c.edge(i);
        const Point2 a{e.a.x(), e.a.z()}, b{e.b.x(), e.b.z()};
        best = std::min(best, geom::point_segment_distance_2d(Point2::Zero(), a, b));
    }
    return best;
}

double distance_to_y_axis(const SampledCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = c.size();
    const std::size_t m = c.closed ? n : n - 1;
    for (std::size_t i = 0; i < m; ++i) {
        const Point3& p = c.samples[i];
        const Point3& q = c.samples[(i + 1) % n];
        best = std::min(best, geom::point_segment_distance_2d(Point2::Zero(), {p.x(), p.z()}, {q.x(), q.z()}));
    }
    return best;
}

SampledCurve make_circle(double radius, std::size_t samples) {
    SampledCurve c;
    c.closed = true;
    c.total_length = 2.0 * M_PI * radius;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
        c.samples.emplace_back(radius * std::cos(t), radius * std::sin(t), 0.0);
        c.arclength.push_back(radius * t);
    }
    return c;
}

namespace {

// Samples a closed parametric curve over t in [0, 2pi) uniformly in t and
// integrates arclength with composite Gauss-Legendre on |gamma'(t)|.
template <class F, class D>
SampledCurve sample_parametric(F&& f, D&& df, std::size_t samples) {
    static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
    static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
    SampledCurve c;
    c.closed = true;
    const double dt = 2.0 * M_PI / static_cast<double>(samples);
    double s = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t0 = dt * static_cast<double>(i);
        c.samples.push_back(f(t0));
        c.arclength.push_back(s);
        constexpr int sub = 4;
        for (int k = 0; k < sub; ++k) {
            const double a = t0 + dt * k / sub, b = a + dt / sub;
            for (int q = 0; q < 5; ++q) {
                const double t = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
                s += 0.5 * (b - a) * gw[q] * df(t).norm();
            }
        }
    }
    c.total_length = s;
    return c;
}

}  // namespace

SampledCurve make_ellipse(double a, double b, std::size_t samples) {
    return sample_parametric([&](double t) { return Point3(a * std::cos(t), b * std::sin(t), 0.0); },
                             [&](double t) { return Vec3(-a * std::sin(t), b * std::cos(t), 0.0); },
                             samples);
}

SampledCurve make_double_loop(double major_radius, double gap, std::size_t samples) {
    const double R = major_radius;
    const double a = 0.5 * gap;
    return sample_parametric(
        [&](double t) {
            const double rho = R + a * std::cos(t);
            return Point3(rho * std::cos(2 * t), rho * std::sin(2 * t), a * std::sin(t));
        },
        [&](double t) {
            const double rho = R + a * std::cos(t);
            const double drho = -a * std::sin(t);
            return Vec3(drho * std::cos(2 * t) - 2 * rho * std::sin(2 * t),
                        drho * std::sin(2 * t) + 2 * rho * std::cos(2 * t), a * std::cos(t));
        },
        samples);
}

SampledCurve make_stadium(double rho, double straight, std::size_t samples) {
    // Straights along x at y = -rho and y = +rho, semicircles centred at
    // x = +-straight/2.
    const double half = 0.5 * straight;
    const double arc = M_PI * rho;
    const double L = 2.0 * straight + 2.0 * arc;
    SampledCurve c;
    c.closed = true;
    c.total_length = L;
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = L * static_cast<double>(i) / static_cast<double>(samples);
        Point3 p;
        if (s < straight) {
            p = {-half + s, -rho, 0.0};
        } else if (s < straight + arc) {
            const double t = -M_PI / 2 + (s - straight) / rho;
            p = {half + rho * std::cos(t), rho * std::sin(t), 0.0};
        } else if (s < 2 * straight + arc) {
            p = {half - (s - straight - arc), rho, 0.0};
        } else {
            const double t = M_PI / 2 + (s - 2 * straight - arc) / rho;
            p = {-half + rho * std::cos(t), rho * std::sin(t), 0.0};
        }
        c.samples.push_back(p);
        c.arclength.push_back(s);
    }
    return c;
}

SampledCurve transformed(const SampledCurve& c, const Eigen::Matrix3d& rotation, const Vec3& shift,
                         double scale) {
    SampledCurve out = c;
    for (auto& p : out.samples) p = scale * (rotation * p) + shift;
    for (auto& s : out.arclength) s *= scale;
    out.total_length *= scale;
    return out;
}

PolygonalCurve transformed(const PolygonalCurve& c, const Eigen::Matrix3d& rotation,
                           const Vec3& shift, double scale) {
    PolygonalCurve out = c;
    for (auto& p : out.vertices) p = scale * (rotation * p) + shift;
    return out;
}

namespace {

json points_json(const std::vector<Point3>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.x(), p.y(), p.z()});
    return arr;
}

std::vector<Point3> points_from_json(const json& arr) {
    if (!arr.is_array()) throw InputError("curves", "points must be an array");
    std::vector<Point3> pts;
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 3) throw InputError("curves", "each point must be [x,y,z]");
        for (const auto& x : p) {
            if (!x.is_number()) throw InputError("curves", "point coordinates must be numbers");
        }
        pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return pts;
}

}  // namespace

json to_json(const PolygonalCurve& c) {
    return {{"kind", "polygonal"}, {"closed", c.closed}, {"points", points_json(c.vertices)}};
}

json to_json(const SampledCurve& c) {
    return {{"kind", "sampled"},
            {"closed", c.closed},
            {"points", points_json(c.samples)},
            {"arclength", c.arclength},
            {"total_length", c.total_length}};
}

json to_json(const ThicknessReport& r) {
    json j = {{"r", r.r},
              {"limiting_factor", to_string(r.limiting_factor)},
              {"witness", r.limiting_factor == LimitingFactor::Curvature
                              ? json(r.witness_i)
                              : json::array({r.witness_i, r.witness_j})},
              {"ropelength", r.ropelength},
              {"max_curvature", r.max_curvature},
              {"doubly_critical_candidates", r.doubly_critical_candidates}};
    j["doubly_critical_distance"] =
        std::isfinite(r.doubly_critical_distance) ? json(r.doubly_critical_distance) : json(nullptr);
    return j;
}

CurveFile curve_from_json(const json& j) {
    if (!j.is_object()) throw InputError("curves", "curve file must be a JSON object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw InputError("curves", "missing string field 'kind'");
    if (!j.contains("points")) throw InputError("curves", "missing field 'points'");
    const bool closed = j.value("closed", true);
    if (!closed) throw InputError("curves", "only closed curves are supported");
    CurveFile f;
    f.kind = j["kind"].get<std::string>();
    auto pts = points_from_json(j["points"]);
    if (f.kind == "polygonal") {
        PolygonalCurve p{std::move(pts), true};
        p.validate();
        f.polygon = std::move(p);
    } else if (f.kind == "sampled") {
        SampledCurve c;
        if (j.contains("arclength")) {
            c.samples = std::move(pts);
            c.closed = true;
            c.arclength = j["arclength"].get<std::vector<double>>();
            c.total_length = j.at("total_length").get<double>();
        } else {
            c = SampledCurve::from_points(std::move(pts), true);
        }
        c.validate();
        f.sampled = std::move(c);
    } else {
        throw InputError("curves", "unknown curve kind '" + f.kind + "'");
    }
    return f;
}

CurveFile read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("curves", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("curves", std::string("malformed JSON in ") + path + ": " + e.what());
    }
    try {
        return curve_from_json(j);
    } catch (const json::exception& e) {
        throw InputError("curves", std::string("bad curve file ") + path + ": " + e.what());
    }
}

}  // namespace knotspan::curves
