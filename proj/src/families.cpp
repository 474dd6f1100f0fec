#include "knotspan/families.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace knotspan::families {

namespace {

// Middle arcs: strands turn at height kMidTurn onto 45 degree diagonals that
// end on verticals at |x| = kInnerX (inner strands) or kOuterX.
constexpr double kMidTurn = 0.019;
constexpr double kInnerX = 0.0115;
constexpr double kOuterX = 0.0175;

double polyline_length(const std::vector<Point3>& pts) {
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) s += (pts[i] - pts[i - 1]).norm();
    return s;
}

std::string inverse_word(const std::string& word) {
    std::istringstream in(word);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) {
        t[0] = std::islower(static_cast<unsigned char>(t[0])) ? static_cast<char>(std::toupper(t[0]))
                                                              : static_cast<char>(std::tolower(t[0]));
        tokens.push_back(t);
    }
    std::reverse(tokens.begin(), tokens.end());
    std::string out;
    for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
    return out;
}

}  // namespace

std::size_t BraidEmbedding::segment_count() const {
    std::size_t n = 0;
    for (const auto& s : strands) n += s.points.size() - 1;
    return n;
}

double BraidEmbedding::length() const {
    double l = 0.0;
    for (const auto& s : strands) l += polyline_length(s.points);
    return l;
}

std::array<std::size_t, 4> BraidEmbedding::permutation() const {
    std::array<std::size_t, 4> p{};
    for (const auto& s : strands) p[s.from] = s.to;
    return p;
}

void BraidEmbedding::validate(const Tolerance& tol) const {
    if (strands.size() != 4) throw Error("families", "braid must have 4 strands");
    std::array<bool, 4> hit{};
    for (const auto& s : strands) {
        if (s.points.size() < 2) throw Error("families", "strand too short");
        const Point3& a = s.points.front();
        const Point3& b = s.points.back();
        if ((a - Point3(s.from * spacing, 0, 0)).norm() > tol.eps_len ||
            (b - Point3(s.to * spacing, 0, height)).norm() > tol.eps_len) {
            throw Error("families", "strand endpoint off its position");
        }
        const Vec3 d0 = s.points[1] - a, d1 = b - s.points[s.points.size() - 2];
        if (std::hypot(d0.x(), d0.y()) > tol.eps_len || std::hypot(d1.x(), d1.y()) > tol.eps_len) {
            throw Error("families", "strand end segments must be vertical");
        }
        for (std::size_t i = 1; i < s.points.size(); ++i) {
            if (!(s.points[i].z() > s.points[i - 1].z())) throw Error("families", "strand not monotone in z");
        }
        if (hit[s.to]) throw Error("families", "braid permutation is not a bijection");
        hit[s.to] = true;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const auto& p = strands[i].points;
            const auto& q = strands[j].points;
            for (std::size_t a = 0; a + 1 < p.size(); ++a) {
                for (std::size_t b = 0; b + 1 < q.size(); ++b) {
                    if (geom::segment_distance({p[a], p[a + 1]}, {q[b], q[b + 1]}, tol) <= tol.eps_len) {
                        throw Error("families", "braid strands intersect");
                    }
                }
            }
        }
    }
}

BraidEmbedding alpha_block() {
    // Leftmost strand passes in front of the second and behind the third.
    BraidEmbedding b;
    b.word = "s1 S2";
    b.height = 6.0;
    b.spacing = 1.0;
    b.strands = {
        {0, 2, {{0, 0, 0}, {0, 0, 1}, {0.75, 0.5, 2.5}, {1.25, -0.5, 3.5}, {2, 0, 5}, {2, 0, 6}}},
        {1, 0, {{1, 0, 0}, {1, 0, 1}, {0, 0, 3}, {0, 0, 6}}},
        {2, 1, {{2, 0, 0}, {2, 0, 3}, {1, 0, 5}, {1, 0, 6}}},
        {3, 3, {{3, 0, 0}, {3, 0, 6}}},
    };
    const double s = 1.0 / b.length();
    for (auto& st : b.strands) {
        for (auto& p : st.points) p *= s;
    }
    b.height *= s;
    b.spacing *= s;
    return b;
}

BraidEmbedding stack(const BraidEmbedding& b, std::size_t n) {
    if (n == 0) throw InputError("families", "stack needs n >= 1");
    BraidEmbedding out;
    out.height = b.height * static_cast<double>(n);
    out.spacing = b.spacing;
    std::vector<const BraidStrand*> by_from(4, nullptr);
    for (const auto& s : b.strands) by_from[s.from] = &s;
    for (std::size_t k = 0; k < n; ++k) out.word += (k ? " " : "") + b.word;
    for (std::size_t p = 0; p < 4; ++p) {
        BraidStrand s;
        s.from = p;
        std::size_t q = p;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& piece = *by_from[q];
            const Vec3 shift(0, 0, b.height * static_cast<double>(k));
            for (std::size_t i = (k == 0 ? 0 : 1); i < piece.points.size(); ++i) {
                s.points.push_back(piece.points[i] + shift);
            }
            q = piece.to;
        }
        s.to = q;
        out.strands.push_back(std::move(s));
    }
    return out;
}

BraidEmbedding mirrored(const BraidEmbedding& b) {
    BraidEmbedding out;
    out.height = b.height;
    out.spacing = b.spacing;
    out.word = inverse_word(b.word);
    out.strands.resize(4);
    for (const auto& s : b.strands) {
        BraidStrand m;
        m.from = s.to;
        m.to = s.from;
        for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) m.points.emplace_back(it->x(), it->y(), b.height - it->z());
        out.strands[m.from] = std::move(m);
    }
    return out;
}

namespace {

// Nodes: top of the upper braid (0..3), bottom of the upper braid (4..7), top
// of the lower braid (8..11), bottom of the lower braid (12..15).
struct Piece {
    std::size_t from, to;
    std::vector<Point3> points;
    bool braid = false;
    bool upper = false;
};

// Order in which the pieces form one closed loop, with a reversal flag.
std::vector<std::pair<std::size_t, bool>> walk_order(const std::vector<Piece>& pieces) {
    std::map<std::size_t, std::vector<std::size_t>> at;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        at[pieces[i].from].push_back(i);
        at[pieces[i].to].push_back(i);
    }
    for (const auto& [node, list] : at) {
        if (list.size() != 2) throw Error("families", "closing pattern leaves node " + std::to_string(node) + " open");
    }
    std::vector<std::pair<std::size_t, bool>> out;
    std::vector<bool> used(pieces.size(), false);
    std::size_t piece = 0, node = pieces[0].from;
    for (std::size_t step = 0; step < pieces.size(); ++step) {
        if (used[piece]) throw Error("families", "closing pattern gives more than one component");
        used[piece] = true;
        const auto& p = pieces[piece];
        const bool rev = p.from != node;
        out.emplace_back(piece, rev);
        node = rev ? p.from : p.to;
        const auto& list = at[node];
        piece = list[0] == piece ? list[1] : list[0];
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw Error("families", "closing pattern gives more than one component");
    }
    return out;
}

std::vector<Point3> assemble(const std::vector<Piece>& pieces, std::vector<int>* owner = nullptr) {
    std::vector<Point3> out;
    for (const auto& [idx, rev] : walk_order(pieces)) {
        std::vector<Point3> pts = pieces[idx].points;
        if (rev) std::reverse(pts.begin(), pts.end());
        if (!out.empty() && (out.back() - pts.front()).norm() > 1e-12) {
            throw Error("families", "pieces do not meet");
        }
        for (std::size_t i = 1; i < pts.size(); ++i) {
            out.push_back(pts[i]);
            if (owner) owner->push_back(static_cast<int>(idx));
        }
    }
    return out;
}

struct KnLayout {
    std::vector<Piece> pieces;
    double w = 0.0;
    double leg = 0.0;
};

KnLayout kn_layout(std::size_t n) {
    const BraidEmbedding top_raw = stack(alpha_block(), n);
    const BraidEmbedding bottom_raw = stack(mirrored(alpha_block()), n);
    const double scale = 1.0 / (3.0 * static_cast<double>(n));
    const double w = top_raw.spacing * scale;
    const double hb = top_raw.height * scale;
    std::array<double, 4> x{};
    for (std::size_t i = 0; i < 4; ++i) x[i] = (static_cast<double>(i) - 1.5) * w;
    const std::array<double, 4> side{-kOuterX, -kInnerX, kInnerX, kOuterX};

    // Closing arcs as functions of the leg K; their total length is affine in K.
    auto arcs_for = [&](double K) {
        const double z0 = kMidTurn + K, zt = z0 + hb;
        std::vector<Piece> arcs;
        auto cap = [&](std::size_t i, std::size_t j, double zb, double dir, double extra, std::size_t ni,
                       std::size_t nj) {
            const double l = K + extra, in = w / 3;
            Piece p{ni, nj, {}};
            p.points = {{x[i], 0, zb},
                        {x[i], 0, zb + dir * l},
                        {x[i] + in, 0, zb + dir * (l + in)},
                        {x[j] - in, 0, zb + dir * (l + in)},
                        {x[j], 0, zb + dir * l},
                        {x[j], 0, zb}};
            return p;
        };
        arcs.push_back(cap(0, 1, zt, +1, 0, 0, 1));
        arcs.push_back(cap(2, 3, zt, +1, 0, 2, 3));
        for (std::size_t i = 0; i < 4; ++i) {
            const double d = std::abs(side[i] - x[i]);
            const double h = kMidTurn - d;
            Piece p{4 + i, 8 + i, {}};
            p.points = {{x[i], 0, z0},      {x[i], 0, kMidTurn},  {side[i], 0, h},
                        {side[i], 0, -h},   {x[i], 0, -kMidTurn}, {x[i], 0, -z0}};
            arcs.push_back(p);
        }
        arcs.push_back(cap(1, 2, -zt, -1, 0, 13, 14));
        arcs.push_back(cap(0, 3, -zt, -1, w, 12, 15));
        return arcs;
    };
    auto arcs_length = [&](double K) {
        double s = 0.0;
        for (const auto& a : arcs_for(K)) s += polyline_length(a.points);
        return s;
    };
    const double l0 = arcs_length(0.0), l1 = arcs_length(1.0);
    const double K = (1.0 / 3.0 - l0) / (l1 - l0);
    if (!(K > 1e-4)) throw Error("families", "closing arcs too long for n = " + std::to_string(n));

    KnLayout out;
    out.w = w;
    out.leg = K;
    const double z0 = kMidTurn + K;
    for (const auto& s : top_raw.strands) {
        Piece p{4 + s.from, s.to, {}, true, true};
        for (const auto& q : s.points) p.points.emplace_back(q.x() * scale + x[0], q.y() * scale, q.z() * scale + z0);
        out.pieces.push_back(std::move(p));
    }
    for (const auto& s : bottom_raw.strands) {
        // Bottom position of the lower braid is node 12+, top is 8+.
        Piece p{12 + s.from, 8 + s.to, {}, true, false};
        for (const auto& q : s.points) {
            p.points.emplace_back(q.x() * scale + x[0], q.y() * scale, q.z() * scale - z0 - hb);
        }
        out.pieces.push_back(std::move(p));
    }
    auto arcs = arcs_for(K);
    out.pieces.insert(out.pieces.end(), arcs.begin(), arcs.end());
    return out;
}

}  // namespace

KnCurve generate_Kn(std::size_t n) {
    if (n == 0 || n > 10000) throw InputError("families", "K_n needs 1 <= n <= 10000");
    const KnLayout lay = kn_layout(n);
    KnCurve k;
    k.n = n;
    k.leg = lay.leg;
    k.braid_spacing = lay.w;
    k.curve.closed = true;
    k.curve.vertices = assemble(lay.pieces);
    const char* names = "abcdefhg";
    std::size_t arc = 0;
    for (const auto& p : lay.pieces) {
        if (p.braid) {
            for (std::size_t i = 1; i < p.points.size(); ++i) {
                (p.upper ? k.top_edge_lengths : k.bottom_edge_lengths).push_back((p.points[i] - p.points[i - 1]).norm());
            }
        } else {
            k.arcs.push_back({std::string(1, names[arc++]), p.points});
        }
    }
    std::sort(k.arcs.begin(), k.arcs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return k;
}

namespace {

// Smooth path pieces parametrized over [0, 1].
struct PathPiece {
    std::function<Point3(double)> pos;
    std::function<Vec3(double)> vel;
    double turn = 0.0;  // total tangent turning, for sampling density
    bool straight = false;
    int tag = 0;
};

constexpr std::array<double, 8> kGaussX{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

double speed_integral(const PathPiece& p, double t0, double t1) {
    const double h = 0.5 * (t1 - t0), m = 0.5 * (t0 + t1);
    double s = 0.0;
    for (std::size_t k = 0; k < kGaussX.size(); ++k) s += kGaussW[k] * p.vel(m + h * kGaussX[k]).norm();
    return s * h;
}

PathPiece line_piece(const Point3& a, const Point3& b, int tag = 0) {
    PathPiece p;
    p.pos = [a, b](double t) { return Point3(a + t * (b - a)); };
    p.vel = [a, b](double) { return Vec3(b - a); };
    p.straight = true;
    p.tag = tag;
    return p;
}

// Circular arc leaving `start` along unit tangent `t`, bending towards unit
// normal `nrm` with radius r through `angle`.
PathPiece arc_piece(const Point3& start, const Vec3& t, const Vec3& nrm, double r, double angle, int tag = 0) {
    const Point3 c = start + r * nrm;
    PathPiece p;
    p.pos = [=](double s) {
        const double f = s * angle;
        return Point3(c - r * std::cos(f) * nrm + r * std::sin(f) * t);
    };
    p.vel = [=](double s) {
        const double f = s * angle;
        return Vec3(angle * r * (std::sin(f) * nrm + std::cos(f) * t));
    };
    p.turn = angle;
    p.tag = tag;
    return p;
}

PathPiece reversed_piece(const PathPiece& base) {
    PathPiece p = base;
    p.pos = [base](double t) { return base.pos(1.0 - t); };
    p.vel = [base](double t) { return Vec3(-base.vel(1.0 - t)); };
    return p;
}

PathPiece mapped_piece(const PathPiece& base, const Eigen::Matrix3d& m, const Vec3& shift) {
    PathPiece p = base;
    p.pos = [base, m, shift](double t) { return Point3(m * base.pos(t) + shift); };
    p.vel = [base, m](double t) { return Vec3(m * base.vel(t)); };
    return p;
}

// Vertices of a polyline with collinear interior vertices removed.
std::vector<Point3> drop_collinear(const std::vector<Point3>& v, bool closed) {
    const std::size_t n = v.size();
    std::vector<Point3> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i + 1 == n)) {
            out.push_back(v[i]);
            continue;
        }
        const Vec3 a = (v[i] - v[(i + n - 1) % n]).normalized();
        const Vec3 b = (v[(i + 1) % n] - v[i]).normalized();
        if (a.cross(b).norm() > 1e-12 || a.dot(b) < 0) out.push_back(v[i]);
    }
    return out;
}

// Replaces every corner by a tangent circular arc of radius r. Throws when a
// tangent length exceeds 0.45 of an adjacent edge. `max_offset` receives the
// largest distance from a corner to its arc.
std::vector<PathPiece> fillet_polyline(const std::vector<Point3>& raw, bool closed, double r, double* max_offset = nullptr,
                                       int tag = 0) {
    const std::vector<Point3> v = drop_collinear(raw, closed);
    const std::size_t n = v.size();
    const std::size_t edges = closed ? n : n - 1;
    std::vector<double> cut_in(edges, 0.0), cut_out(edges, 0.0);  // trimmed at each edge end
    struct Corner {
        Point3 start;
        Vec3 t, nrm;
        double angle;
    };
    std::vector<std::optional<Corner>> corners(n);
    double offset = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i + 1 == n)) continue;
        const std::size_t ein = (i + n - 1) % n, eout = i;  // edge e runs v[e] -> v[e+1]
        const Vec3 a = (v[i] - v[ein]).normalized();
        const Vec3 b = (v[(i + 1) % n] - v[i]).normalized();
        const double theta = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        const double tl = r * std::tan(0.5 * theta);
        const double lin = (v[i] - v[ein]).norm(), lout = (v[(i + 1) % n] - v[i]).norm();
        if (tl > 0.45 * std::min(lin, lout)) {
            throw Error("families", "fillet of radius " + std::to_string(r) + " does not fit at a corner");
        }
        cut_out[ein] = tl;
        cut_in[eout] = tl;
        const Vec3 nrm = (b - a.dot(b) * a).normalized();
        corners[i] = Corner{Point3(v[i] - tl * a), a, nrm, theta};
        offset = std::max(offset, r * (1.0 / std::cos(0.5 * theta) - 1.0));
    }
    if (max_offset) *max_offset = offset;
    std::vector<PathPiece> out;
    for (std::size_t e = 0; e < edges; ++e) {
        const Point3 a = v[e], b = v[(e + 1) % n];
        const Vec3 d = (b - a).normalized();
        out.push_back(line_piece(a + cut_in[e] * d, b - cut_out[e] * d, tag));
        const std::size_t j = (e + 1) % n;
        if (corners[j]) out.push_back(arc_piece(corners[j]->start, corners[j]->t, corners[j]->nrm, r, corners[j]->angle, tag));
    }
    return out;
}

struct Sampled {
    SampledCurve curve;
    std::vector<int> tags;  // per sample
};

// Samples a closed chain of pieces: at most 3 degrees of turning per sample,
// gaps at most `spacing` and always at most length/1000.
Sampled sample_closed(const std::vector<PathPiece>& pieces, double spacing) {
    std::vector<double> len(pieces.size());
    double total = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        double l = 0.0;
        for (int k = 0; k < 16; ++k) l += speed_integral(pieces[i], k / 16.0, (k + 1) / 16.0);
        len[i] = l;
        total += l;
    }
    const double h = std::min(spacing, total / 1000.0);
    Sampled out;
    out.curve.closed = true;
    double s = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        const double by_turn = std::abs(p.turn) / (3.0 * M_PI / 180.0);
        const auto m = static_cast<std::size_t>(std::ceil(std::max({1.0, by_turn, len[i] / h})));
        double t_prev = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(m);
            if (k > 0) s += speed_integral(p, t_prev, t);
            out.curve.samples.push_back(p.pos(t));
            out.curve.arclength.push_back(s);
            out.tags.push_back(p.tag);
            t_prev = t;
        }
        s += speed_integral(p, t_prev, 1.0);
    }
    out.curve.total_length = s;
    return out;
}

void rescale(SampledCurve& c, double factor) {
    for (auto& p : c.samples) p *= factor;
    for (auto& a : c.arclength) a *= factor;
    c.total_length *= factor;
}

}  // namespace

double SmoothFamilyParams::lambda(std::size_t n) {
    const double m = static_cast<double>(n);
    return 1.0 / (4.0 * m * m);
}

SmoothCurve generate_Delta(std::size_t n, double blend) {
    if (n == 0 || n > 10000) throw InputError("families", "Delta_n needs 1 <= n <= 10000");
    if (!(blend > 0.0 && blend <= 1.0)) throw InputError("families", "blend must lie in (0, 1]");
    const KnLayout lay = kn_layout(n);
    std::vector<int> owner;
    const std::vector<Point3> poly = assemble(lay.pieces, &owner);
    const double rho = blend * smooth_family_params().fillet / static_cast<double>(n);
    double offset = 0.0;
    const auto pieces = fillet_polyline(poly, true, rho, &offset);
    Sampled s = sample_closed(pieces, 2.0 * rho);
    SmoothCurve out;
    out.n = n;
    out.raw_length = s.curve.total_length;
    out.hausdorff_to_kn = offset;
    const double f = 1.0 / out.raw_length;
    rescale(s.curve, f);
    out.curve = std::move(s.curve);
    out.fillet_radius = rho * f;
    return out;
}

namespace {

constexpr double kBetaFillet = 0.8;  // in units of the unnormalized block
constexpr double kGammaZ0 = 0.045;
constexpr double kGammaBraidScale = 0.5;  // braid height relative to K_n
constexpr double kBendRadius = 0.0105;

struct Chain {
    std::size_t from, to;
    std::vector<PathPiece> pieces;
};

struct Turtle {
    Point3 p;
    Vec3 h;
    std::vector<PathPiece> out;

    void fwd(double l) {
        if (l <= 0.0) return;
        out.push_back(line_piece(p, p + l * h));
        p += l * h;
    }
    // Positive angle turns counterclockwise in the xz-plane (x right, z up).
    void turn(double r, double angle) {
        const Vec3 left(-h.z(), 0.0, h.x());
        const Vec3 nrm = angle > 0 ? left : Vec3(-left);
        out.push_back(arc_piece(p, h, nrm, r, std::abs(angle)));
        const Point3 c = p + r * nrm;
        const double f = std::abs(angle);
        p = c - r * std::cos(f) * nrm + r * std::sin(f) * h;
        h = (std::cos(f) * h + std::sin(f) * nrm).normalized();
    }
};

double smoothstep5(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep5_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Adds an x-offset that is x0 on the first piece, x1 on the last, and blends
// smoothly in between.
std::vector<PathPiece> with_x_shift(const std::vector<PathPiece>& pieces, double x0, double x1) {
    std::vector<double> len;
    double total = 0.0;
    for (const auto& p : pieces) {
        len.push_back(speed_integral(p, 0.0, 0.5) + speed_integral(p, 0.5, 1.0));
        total += len.back();
    }
    const double ua = len.front() / total, ub = 1.0 - len.back() / total;
    std::vector<PathPiece> out;
    double s = 0.0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const PathPiece base = pieces[k];
        const double s0 = s / total, ds = len[k] / total;
        PathPiece p = base;
        p.pos = [=](double t) {
            const double v = (s0 + ds * t - ua) / (ub - ua);
            return Point3(base.pos(t) + Vec3(x0 + (x1 - x0) * smoothstep5(v), 0, 0));
        };
        p.vel = [=](double t) {
            const double v = (s0 + ds * t - ua) / (ub - ua);
            return Vec3(base.vel(t) + Vec3((x1 - x0) * smoothstep5_d(v) * ds / (ub - ua), 0, 0));
        };
        out.push_back(p);
        s += len[k];
    }
    return out;
}

// Teardrop: up a leg of height H, three quarters of a turn to the left of
// radius R, a quarter turn back to the right, and down onto the leg line.
// sx, sz mirror the template; the lobe is attached at (0, zbase).
std::vector<PathPiece> lobe(double R, double H, double sx, double sz, double zbase) {
    Turtle t{Point3(0, 0, 0), Vec3(0, 0, 1), {}};
    t.fwd(H);
    t.turn(R, 1.5 * M_PI);
    t.turn(R, -0.5 * M_PI);
    t.fwd(H - 2.0 * R);
    Eigen::Matrix3d m = Eigen::Vector3d(sx, 1.0, sz).asDiagonal();
    std::vector<PathPiece> out;
    for (const auto& p : t.out) out.push_back(mapped_piece(p, m, Vec3(0, 0, zbase)));
    return out;
}

// Middle arc from (0, z0) down to (0, -z0), bending out to the side sx with
// an extra horizontal run, turning at height zdep.
std::vector<PathPiece> bend_arc(double z0, double zdep, double extra, double sx) {
    const double r = kBendRadius;
    Turtle t{Point3(0, 0, z0), Vec3(0, 0, -1), {}};
    t.fwd(z0 - zdep);
    t.turn(r, -0.5 * M_PI);
    t.fwd(extra);
    t.turn(r, 0.5 * M_PI);
    t.fwd(2.0 * (zdep - 2.0 * r));
    t.turn(r, 0.5 * M_PI);
    t.fwd(extra);
    t.turn(r, -0.5 * M_PI);
    t.fwd(z0 - zdep);
    Eigen::Matrix3d m = Eigen::Vector3d(sx, 1.0, 1.0).asDiagonal();
    std::vector<PathPiece> out;
    for (const auto& p : t.out) out.push_back(mapped_piece(p, m, Vec3::Zero()));
    return out;
}

std::vector<Chain> gamma_braid(const BraidEmbedding& block, std::size_t n, double zbase, bool upper) {
    const double sigma = alpha_block().spacing;  // unit-length normalization of the block
    const double c = kGammaBraidScale * sigma / (3.0 * static_cast<double>(n));
    const double lam = SmoothFamilyParams::lambda(n);
    const Eigen::Matrix3d m = Eigen::Vector3d(c * lam, c * lam, c).asDiagonal();
    const double x0 = -1.5 * c * lam * block.spacing;
    std::vector<std::vector<PathPiece>> smooth(4);
    std::vector<std::size_t> next(4);
    for (const auto& s : block.strands) {
        smooth[s.from] = fillet_polyline(s.points, false, kBetaFillet, nullptr, 1);
        next[s.from] = s.to;
    }
    std::vector<Chain> out;
    for (std::size_t p = 0; p < 4; ++p) {
        Chain ch{upper ? 4 + p : 12 + p, 0, {}};
        std::size_t q = p;
        for (std::size_t k = 0; k < n; ++k) {
            const Vec3 shift(x0, 0, zbase + c * block.height * static_cast<double>(k));
            for (const auto& piece : smooth[q]) ch.pieces.push_back(mapped_piece(piece, m, shift));
            q = next[q];
        }
        ch.to = upper ? q : 8 + q;
        out.push_back(std::move(ch));
    }
    return out;
}

std::vector<PathPiece> walk_chains(const std::vector<Chain>& chains) {
    std::vector<Piece> skeleton;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        skeleton.push_back({chains[i].from, chains[i].to, {}});
    }
    std::vector<PathPiece> out;
    for (const auto& [idx, rev] : walk_order(skeleton)) {
        const auto& ps = chains[idx].pieces;
        if (!rev) {
            out.insert(out.end(), ps.begin(), ps.end());
        } else {
            for (auto it = ps.rbegin(); it != ps.rend(); ++it) out.push_back(reversed_piece(*it));
        }
        if (out.size() > ps.size()) {
            const Point3 prev_end = out[out.size() - ps.size() - 1].pos(1.0);
            if ((prev_end - out[out.size() - ps.size()].pos(0.0)).norm() > 1e-12) {
                throw Error("families", "smooth pieces do not meet");
            }
        }
    }
    return out;
}

}  // namespace

SmoothCurve generate_Gamma(std::size_t n) {
    if (n == 0 || n > 10000) throw InputError("families", "Gamma_n needs 1 <= n <= 10000");
    const BraidEmbedding raw_alpha = [] {
        BraidEmbedding a = alpha_block();
        const double s = 1.0 / a.spacing;
        for (auto& st : a.strands) {
            for (auto& p : st.points) p *= s;
        }
        a.height *= s;
        a.spacing = 1.0;
        return a;
    }();
    const double sigma = alpha_block().spacing;
    const double hb = 2.0 * kGammaBraidScale * sigma;  // independent of n
    const double w = kGammaBraidScale * sigma / (3.0 * static_cast<double>(n)) * SmoothFamilyParams::lambda(n);
    std::array<double, 4> x{};
    for (std::size_t i = 0; i < 4; ++i) x[i] = (static_cast<double>(i) - 1.5) * w;
    const double z0 = kGammaZ0, zt = z0 + hb;

    std::vector<Chain> chains = gamma_braid(raw_alpha, n, z0, true);
    auto lower = gamma_braid(mirrored(raw_alpha), n, -zt, false);
    chains.insert(chains.end(), lower.begin(), lower.end());
    const double u = 0.006, rt = 0.012;
    chains.push_back({1, 0, with_x_shift(lobe(rt, 2 * rt + 0.01, 1, 1, zt), x[1], x[0])});
    chains.push_back({2, 3, with_x_shift(lobe(rt, 2 * rt + 0.01, -1, 1, zt), x[2], x[3])});
    chains.push_back({14, 13, with_x_shift(lobe(u, 5 * u, 1, -1, -zt), x[2], x[1])});
    chains.push_back({15, 12, with_x_shift(lobe(3 * u, 6.5 * u, 1, -1, -zt), x[3], x[0])});
    const double zd = 2 * kBendRadius + 0.002, zc = zd + kBendRadius + 0.006;
    const std::array<double, 4> zdep{zc, zd, zd, zc};
    const std::array<double, 4> extra{0.012, 0.0, 0.0, 0.012};
    for (std::size_t i = 0; i < 4; ++i) {
        chains.push_back({4 + i, 8 + i, with_x_shift(bend_arc(z0, zdep[i], extra[i], i < 2 ? 1.0 : -1.0), x[i], x[i])});
    }
    const auto pieces = walk_chains(chains);
    Sampled s = sample_closed(pieces, 1.0 / 4000.0);
    SmoothCurve out;
    out.n = n;
    out.raw_length = s.curve.total_length;
    rescale(s.curve, 1.0 / out.raw_length);
    out.curve = std::move(s.curve);
    for (std::size_t i = 0; i < s.tags.size();) {
        if (s.tags[i] != 1) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.tags.size() && s.tags[j] == 1) ++j;
        out.braid_samples.emplace_back(i, j);
        i = j;
    }
    return out;
}

SmoothFamilyParams smooth_family_params() {
    SmoothFamilyParams p;
    // Frozen from the generated geometry: min over n <= 16 of 3n * thickness
    // of Delta_n rounded down, max curvature of Gamma_n rounded up.
    p.k = 0.0045;
    p.K0 = 250.0;
    p.fillet = 0.0015;
    return p;
}

Family family_from_string(const std::string& s) {
    if (s == "kn") return Family::Kn;
    if (s == "delta") return Family::Delta;
    if (s == "gamma") return Family::Gamma;
    throw InputError("families", "unknown family '" + s + "' (kn, delta or gamma)");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Kn: return "kn";
        case Family::Delta: return "delta";
        case Family::Gamma: return "gamma";
    }
    return "?";
}

bool FamilyReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

FamilyReport verify_family(const PolygonalCurve& c, std::size_t n) {
    FamilyReport r;
    r.family = Family::Kn;
    r.n = n;
    r.edges = c.edge_count();
    r.length = curves::length(c);
    r.clearance = curves::distance_to_y_axis(c);
    r.checks.emplace_back("edges", r.edges <= 24 * n + 40);
    r.checks.emplace_back("length", std::abs(r.length - 1.0) <= 1e-9);
    r.checks.emplace_back("clearance", r.clearance >= kClearance);
    r.checks.emplace_back("embedded", curves::is_embedded(c));
    return r;
}

FamilyReport verify_family(const SampledCurve& c, Family f, std::size_t n) {
    if (f == Family::Kn) throw InputError("families", "K_n is polygonal");
    const SmoothFamilyParams params = smooth_family_params();
    FamilyReport r;
    r.family = f;
    r.n = n;
    r.edges = c.size();
    r.length = curves::length(c);
    r.clearance = curves::distance_to_y_axis(c);
    double chords = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) chords += (c.samples[(i + 1) % c.size()] - c.samples[i]).norm();
    r.checks.emplace_back("length", std::abs(r.length - 1.0) <= 1e-9);
    r.checks.emplace_back("arclength_consistent", chords <= r.length * (1 + 1e-12) && chords >= 0.99 * r.length);
    r.checks.emplace_back("dense", c.is_dense());
    r.checks.emplace_back("clearance", r.clearance >= kClearance);
    r.checks.emplace_back("embedded", curves::is_embedded(c));
    const auto kappa = curves::curvature_profile(c);
    r.max_curvature = kappa.empty() ? 0.0 : *std::max_element(kappa.begin(), kappa.end());
    if (f == Family::Delta) {
        const auto th = curves::thickness(c);
        r.thickness = th.r;
        r.checks.emplace_back("thickness", th.r >= params.k / (3.0 * static_cast<double>(n)));
        r.checks.emplace_back("curvature_vs_thickness", curves::max_curvature_vs_thickness_check(c, th));
    } else {
        r.checks.emplace_back("curvature_cap", r.max_curvature <= params.K0);
    }
    return r;
}

std::vector<ConstantEntry> theorem_constants(double r0) {
    return {
        {"C5", "2^(10^8)", "triangle count base for normal-surface spanning disks", false, 0.0},
        {"C4", "32 * C5^696", "area bound base for polygons, exponent n^2", false, 0.0},
        {"C0", "C4^33 as written; C4^(33^2) from the squared exponent", "area bound base for smooth curves", false,
         0.0},
        {"C1", "C0^k, with C0 the lower-bound base for Delta_n", "area lower bound base for Delta_n", false, 0.0},
        {"C2", "exists, no value given", "triangle count bound for polygon spanning disks", false, 0.0},
        {"C3", "exists, no value given", "triangle count lower bound for K_n", false, 0.0},
        {"C6", "enlarged from C0", "strict area bound base for smooth curves", false, 0.0},
        {"c7", "pi * r0^2 / 2", "multiplicity area lower bound factor, A > c7 2^n", true, c7(r0)},
    };
}

double c7(double r0) { return M_PI * r0 * r0 / 2.0; }

nlohmann::json to_json(const FamilyReport& r) {
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, pass] : r.checks) checks[name] = pass;
    return {{"family", to_string(r.family)}, {"n", r.n},           {"ok", r.ok()},
            {"checks", checks},              {"length", r.length}, {"clearance", r.clearance},
            {"edges", r.edges},              {"thickness", r.thickness}, {"max_curvature", r.max_curvature}};
}

nlohmann::json to_json(const KnCurve& k) {
    nlohmann::json arcs = nlohmann::json::object();
    for (const auto& a : k.arcs) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : a.points) pts.push_back({p.x(), p.y(), p.z()});
        arcs[a.name] = pts;
    }
    nlohmann::json j = curves::to_json(k.curve);
    j["family"] = "kn";
    j["n"] = k.n;
    j["r0"] = k.r0;
    j["leg"] = k.leg;
    j["braid_spacing"] = k.braid_spacing;
    j["edges"] = k.curve.edge_count();
    j["arcs"] = arcs;
    return j;
}

nlohmann::json to_json(const std::vector<ConstantEntry>& entries) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j = {{"name", e.name}, {"definition", e.definition}, {"role", e.role}, {"numeric", e.numeric}};
        if (e.numeric) j["value"] = e.value;
        out.push_back(j);
    }
    return out;
}

}  // namespace knotspan::families
