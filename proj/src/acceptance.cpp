#include "knotspan/acceptance.hpp"

#include "knotspan/deform.hpp"
#include "knotspan/disks.hpp"
#include "knotspan/families.hpp"
#include "knotspan/inscribe.hpp"
#include "knotspan/plmesh.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace knotspan::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed checks; the first few end up in the detail string.
struct Checks {
    std::size_t total = 0;
    std::vector<std::string> failures;
    std::ostringstream info;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok) failures.push_back(what);
    }
    bool pass() const { return failures.empty(); }
    std::string detail() const {
        std::ostringstream os;
        os << (total - failures.size()) << "/" << total << " checks";
        const std::string extra = info.str();
        if (!extra.empty()) os << "; " << extra;
        for (std::size_t i = 0; i < failures.size() && i < 5; ++i) os << "; FAILED " << failures[i];
        if (failures.size() > 5) os << "; ... " << failures.size() - 5 << " more";
        return os.str();
    }
};

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// 1. K_n edge budget, length, clearance and embeddedness for n = 1..8.
void family_invariants(Checks& c, std::uint64_t) {
    constexpr double kLengthTol = 1e-9;
    constexpr double kMinClearance = 0.01;
    double worst_len = 0.0, min_clear = 1e300;
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto k = families::generate_Kn(n);
        const std::string tag = "K_" + std::to_string(n);
        const std::size_t edges = k.curve.vertices.size();
        const double len = curves::length(k.curve);
        const double clear = curves::distance_to_y_axis(k.curve);
        worst_len = std::max(worst_len, std::abs(len - 1.0));
        min_clear = std::min(min_clear, clear);
        c.expect(edges <= 24 * n + 40, tag + " edges " + std::to_string(edges));
        c.expect(std::abs(len - 1.0) <= kLengthTol, tag + " length " + num(len, 17));
        c.expect(clear >= kMinClearance, tag + " clearance " + num(clear));
        c.expect(curves::is_embedded(k.curve), tag + " embedded");
    }
    c.info << "max |L-1| " << num(worst_len, 3) << ", min clearance " << num(min_clear);
}

inscribe::InscribedPolygon unit_circle_polygon() {
    return inscribe::inscribe_polygon(curves::make_circle(1.0, 202 * 16), 1.0);
}

// 2. Inscribed polygon of the unit circle and its cone necklace.
void inscribed_polygon(Checks& c, std::uint64_t) {
    const auto ip = unit_circle_polygon();
    c.expect(ip.n == 202, "n = " + std::to_string(ip.n));
    for (std::size_t j = 0; j < ip.a_values.size(); ++j) {
        const double a = ip.a_values[j];
        c.expect(a >= 1.0 / 33 && a <= 1.0 / 32, "a_" + std::to_string(j) + " = " + num(a, 17));
    }
    const auto cones = inscribe::necklace_cones(ip);
    const auto nr = inscribe::check_necklace(ip, cones);
    c.expect(nr.containment_failures == 0, std::to_string(nr.containment_failures) + " containment failures");
    c.expect(nr.disjointness_failures == 0, std::to_string(nr.disjointness_failures) + " disjointness failures");
    double min_margin = 1e300;
    for (std::size_t j = 0; j < ip.n; ++j) {
        const auto cb = inscribe::verify_chord_bound(ip.arc(j), ip.r);
        const double bound = std::cos(2 * inscribe::theta(ip.a_values[j]));
        min_margin = std::min(min_margin, cb.ratio - bound);
        c.expect(cb.ratio >= bound, "chord ratio on edge " + std::to_string(j));
    }
    c.info << "pairs " << nr.pairs_checked << ", min chord margin " << num(min_margin);
}

// 3. Empirical stretch of sigma, its inverse, and tau on the circle necklace.
void lipschitz(Checks& c, std::uint64_t seed) {
    constexpr std::size_t kSigmaPairs = 100000;
    constexpr std::size_t kTauPairsPerCone = 500;  // 202 cones, 101000 pairs
    const std::vector<deform::RadialDiskMap> maps = {
        {{0.0, 0.0}, 1.0}, {{0.3, 0.1}, 1.0}, {{-0.5, 0.45}, 1.0}, {{0.9, 0.0}, 1.0}, {{0.02, -0.03}, 0.05}};
    std::size_t sigma_pairs = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto r = deform::sigma_lipschitz_check(maps[i], kSigmaPairs, seed + 11 + i);
        const double qd = maps[i].q.norm() / maps[i].d;
        sigma_pairs += r.pairs;
        c.expect(r.pairs >= kSigmaPairs, "sigma pairs");
        c.expect(r.empirical <= 1 + qd + 1e-9, "sigma stretch " + num(r.empirical, 12) + " map " + std::to_string(i));
        c.expect(r.inverse_empirical <= 1 / (1 - qd) + 1e-6,
                 "inverse stretch " + num(r.inverse_empirical, 12) + " map " + std::to_string(i));
    }
    const auto ip = unit_circle_polygon();
    const auto cones = inscribe::build_cone_necklace(ip);
    const auto nm = deform::build_necklace_map(ip, cones);
    double worst = -1e300;
    for (std::size_t j = 0; j < nm.maps.size(); ++j) {
        const auto r = deform::cone_lipschitz_check(nm.maps[j], kTauPairsPerCone, seed + 1000 + j);
        worst = std::max(worst, r.empirical - r.lemma_bound);
        c.expect(r.empirical <= r.lemma_bound + 1e-6, "tau stretch on cone " + std::to_string(j));
    }
    c.info << sigma_pairs << " sigma pairs, " << nm.maps.size() * kTauPairsPerCone
           << " tau pairs, max tau excess " << num(worst);
}

// 4. Area factor of the necklace map on the flat spanning mesh.
void deformation(Checks& c, std::uint64_t) {
    const Tolerance tol;
    const auto ip = unit_circle_polygon();
    const auto cones = inscribe::build_cone_necklace(ip);
    const auto nm = deform::build_necklace_map(ip, cones);
    const auto flat = deform::flat_necklace_mesh(ip, cones);
    const auto [out, rep] = deform::necklace_map_mesh(nm, flat, ip.base);
    c.expect(rep.ratio <= 25.0, "area ratio " + num(rep.ratio));
    c.expect(rep.max_boundary_residual <= tol.eps_len, "boundary residual " + num(rep.max_boundary_residual));
    c.info << "area " << num(rep.area_in) << " -> " << num(rep.area_out) << ", ratio " << num(rep.ratio)
           << ", residual " << num(rep.max_boundary_residual, 3) << ", triangles " << out.faces.size();
}

// 5. Ball triangulations of random unknots, 20 per size.
void ball_triangulation(Checks& c, std::uint64_t seed, double& slowest_n15) {
    constexpr std::size_t kPerSize = 20;
    constexpr double kVolumeTol = 1e-6;
    slowest_n15 = 0.0;
    std::size_t built = 0, max_tets = 0;
    for (std::size_t n = 3; n <= 15; ++n) {
        for (std::size_t s = 0; s < kPerSize; ++s) {
            const std::string tag = "n=" + std::to_string(n) + " s=" + std::to_string(s);
            const auto p = plmesh::random_unknot(n, seed + 1000 * n + s);
            const auto t0 = Clock::now();
            plmesh::TetMesh b;
            try {
                b = plmesh::build_ball_triangulation(p, seed + s + 1);
            } catch (const std::exception& e) {
                c.expect(false, tag + " build: " + e.what());
                continue;
            }
            if (n == 15) slowest_n15 = std::max(slowest_n15, since(t0));
            const auto r = plmesh::validate_tetmesh(b, p);
            ++built;
            max_tets = std::max(max_tets, r.tets);
            const double L = curves::length(p);
            c.expect(r.tets < 290 * n * n + 290 * n + 116, tag + " tets " + std::to_string(r.tets));
            c.expect(r.max_radius <= 4 * L * (1 + 1e-12), tag + " radius");
            c.expect(r.polygon_in_skeleton, tag + " polygon in 1-skeleton");
            c.expect(r.face_pairing && r.closed_boundary, tag + " face pairing");
            c.expect(r.orientation, tag + " orientation");
            c.expect(std::abs(r.tet_volume - r.hull_volume) <= kVolumeTol * std::abs(r.hull_volume), tag + " volume");
        }
    }
    c.info << built << " meshes, max tets " << max_tets << ", slowest n=15 build " << num(slowest_n15, 3) << " s";
}

// 6. Thickness engine on circles, a stadium, a homothety, and Delta_n.
void thickness_engine(Checks& c, std::uint64_t) {
    for (double R : {0.1, 1.0, 10.0}) {
        const auto rep = curves::thickness(curves::make_circle(R, 2000));
        c.expect(std::abs(rep.r - R) <= 0.005 * R, "circle R=" + num(R) + " r=" + num(rep.r, 12));
    }
    const double rho = 0.3;
    const auto stadium = curves::make_stadium(rho, 1.0, 3000);
    const auto st = curves::thickness(stadium);
    c.expect(std::abs(st.r - rho) <= 0.01 * rho, "stadium r=" + num(st.r, 12));
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    const auto moved = curves::transformed(stadium, rot, Vec3(4.0, -2.0, 0.5), 7.5);
    const auto mt = curves::thickness(moved);
    const double rel = std::abs(mt.ropelength / st.ropelength - 1.0);
    c.expect(rel <= 1e-9, "ropelength homothety " + num(rel, 3));
    double worst = 0.0;
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto d = families::generate_Delta(n);
        const auto rep = curves::thickness(d.curve);
        const double kmax = max_of(curves::curvature_profile(d.curve));
        worst = std::max(worst, kmax * rep.r);
        c.expect(kmax <= (1.0 / rep.r) * (1 + 1e-9), "Delta_" + std::to_string(n) + " kappa r = " + num(kmax * rep.r, 12));
    }
    c.info << "stadium r " << num(st.r, 10) << ", homothety drift " << num(rel, 3) << ", max kappa r on Delta "
           << num(worst, 12);
}

// 7. Frozen constants of the smooth families.
void smooth_families(Checks& c, std::uint64_t) {
    const auto prm = families::smooth_family_params();
    constexpr double kLengthTol = 1e-9;
    double min_ratio = 1e300, max_kappa = 0.0;
    for (std::size_t n = 1; n <= 16; ++n) {
        const std::string sn = std::to_string(n);
        const auto d = families::generate_Delta(n);
        const double th = curves::thickness(d.curve).r;
        const double floor = prm.k / (3.0 * n);
        min_ratio = std::min(min_ratio, th / floor);
        c.expect(th >= floor, "Delta_" + sn + " thickness " + num(th) + " < " + num(floor));
        c.expect(std::abs(curves::length(d.curve) - 1.0) <= kLengthTol, "Delta_" + sn + " length");

        const auto g = families::generate_Gamma(n);
        const double kmax = max_of(curves::curvature_profile(g.curve));
        max_kappa = std::max(max_kappa, kmax);
        c.expect(kmax <= prm.K0, "Gamma_" + sn + " curvature " + num(kmax));
        c.expect(std::abs(curves::length(g.curve) - 1.0) <= kLengthTol, "Gamma_" + sn + " length");
    }
    c.info << "k = " << prm.k << ", min thickness/(k/3n) " << num(min_ratio) << "; K0 = " << prm.K0
           << ", max Gamma curvature " << num(max_kappa);
}

// 8. Cylinder area certificate on folded sheets.
void area_certificate(Checks& c, std::uint64_t seed) {
    constexpr double kR0 = 0.01;
    constexpr double kAreaTol = 0.05;
    constexpr double kRounding = 1e-10;  // relative summation rounding allowed when both grids are exact
    const double disk = M_PI * kR0 * kR0;
    for (std::size_t folds : {1, 2}) {
        const std::string tag = std::to_string(folds) + "-fold";
        const auto sd = disks::make_disk(disks::folded_sheet(folds, 0.05));
        const auto cert = disks::cylinder_area_certificate(sd, kR0, folds, 256, seed);
        const double exact = static_cast<double>(folds) * disk;
        const double e256 = std::abs(cert.certified_lower_bound - exact);
        const double e512 = std::abs(cert.refined_bound - exact);
        c.expect(e256 <= kAreaTol * exact, tag + " bound " + num(cert.certified_lower_bound));
        c.expect(e512 <= e256 + kRounding * exact, tag + " 512 grid error " + num(e512, 3));
        c.expect(cert.mesh_area >= 0.95 * cert.certified_lower_bound, tag + " soundness");
        c.info << tag << " bound/exact " << num(cert.certified_lower_bound / exact, 12) << ", ";
    }
    // Fold tip inside the cross-section: the grid error is genuine here.
    const auto sd = disks::make_disk(disks::folded_sheet(2, 0.004, 0.00313, 400));
    const auto cert = disks::cylinder_area_certificate(sd, kR0, 2, 256, seed);
    // Two layers up to the outer edge of the round fold.
    const double exact = 2.0 * disks::rect_disk_area(-kR0, 0.00313 + 0.002, -kR0, kR0, kR0);
    const double e256 = std::abs(cert.certified_lower_bound - exact);
    const double e512 = std::abs(cert.refined_bound - exact);
    c.expect(e512 < e256, "partial fold: 512 grid error " + num(e512, 3) + " vs " + num(e256, 3));
    c.expect(cert.mesh_area >= 0.95 * cert.certified_lower_bound, "partial fold soundness");
    c.info << "partial fold errors " << num(e256, 3) << " -> " << num(e512, 3);
}

// 9. Area minimizer over the unit circle and the gradient check.
void minimizer(Checks& c, std::uint64_t seed) {
    const auto sd = disks::make_disk(disks::wavy_disk(1.0, 0.3, 12));
    const auto res = disks::minimize_area(sd, 2000);
    const double a = res.area_log.back();
    const double ratio = disks::isoperimetric_ratio(res.disk);
    c.expect(std::abs(a - M_PI) <= 0.02 * M_PI, "final area " + num(a));
    c.expect(ratio >= 0.98 && ratio <= 1.02, "ratio " + num(ratio));
    bool monotone = true;
    for (std::size_t i = 1; i < res.area_log.size(); ++i) monotone = monotone && res.area_log[i] <= res.area_log[i - 1];
    c.expect(monotone, "area log increases");
    bool fixed = true;
    for (auto v : sd.boundary) fixed = fixed && res.disk.mesh.vertices[v] == sd.mesh.vertices[v];
    c.expect(fixed, "boundary moved");

    auto m = disks::wavy_disk(1.0, 0.3, 10);
    const auto g = disks::area_gradient(m);
    std::mt19937_64 rng(seed + 9);
    std::uniform_int_distribution<std::size_t> pick(0, m.vertices.size() - 1);
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto v = pick(rng);
        Vec3 fd;
        for (int k = 0; k < 3; ++k) {
            const Point3 keep = m.vertices[v];
            m.vertices[v][k] = keep[k] + h;
            const double ap = m.area();
            m.vertices[v][k] = keep[k] - h;
            const double am = m.area();
            m.vertices[v] = keep;
            fd[k] = (ap - am) / (2 * h);
        }
        const double rel = (fd - g[v]).norm() / std::max(g[v].norm(), 1e-3);
        worst = std::max(worst, rel);
        c.expect(rel <= 1e-6, "gradient at vertex " + std::to_string(v));
    }
    c.info << "area " << num(a, 10) << " after " << res.iterations << " iterations, ratio " << num(ratio, 10)
           << ", worst gradient error " << num(worst, 3);
}

struct Meta {
    const char* name;
    double time_limit;
};

constexpr Meta kMeta[9] = {{"family-invariants", 1.0}, {"inscribed-polygon", 5.0}, {"lipschitz-bounds", 30.0},
                            {"deformation-area", 10.0},  {"ball-triangulation", 10.0}, {"thickness-engine", 0.0},
                            {"smooth-families", 0.0},    {"area-certificate", 0.0},   {"minimizer", 0.0}};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > 9) throw InputError("acceptance", "criterion id must be in 1..9");
    CriterionResult out;
    out.id = id;
    out.name = kMeta[id - 1].name;
    out.time_limit = kMeta[id - 1].time_limit;
    Checks c;
    double timed = -1.0;  // criterion 5 is limited per curve
    const auto t0 = Clock::now();
    try {
        switch (id) {
            case 1: family_invariants(c, seed); break;
            case 2: inscribed_polygon(c, seed); break;
            case 3: lipschitz(c, seed); break;
            case 4: deformation(c, seed); break;
            case 5: ball_triangulation(c, seed, timed); break;
            case 6: thickness_engine(c, seed); break;
            case 7: smooth_families(c, seed); break;
            case 8: area_certificate(c, seed); break;
            default: minimizer(c, seed); break;
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    out.seconds = since(t0);
    if (timed < 0) timed = out.seconds;
    if (out.time_limit > 0)
        c.expect(timed < out.time_limit, "runtime " + num(timed, 3) + " s over " + num(out.time_limit) + " s");
    out.pass = c.pass();
    out.detail = c.detail();
    return out;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
    std::vector<CriterionResult> rs;
    for (int id = 1; id <= 9; ++id) rs.push_back(run_criterion(id, seed));
    return rs;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << std::fixed << std::setprecision(2)
       << r.seconds << " s): " << r.detail;
    return os.str();
}

nlohmann::json to_json(const CriterionResult& r) {
    return {{"id", r.id},           {"name", r.name},       {"pass", r.pass},
            {"detail", r.detail},   {"seconds", r.seconds}, {"time_limit", r.time_limit}};
}

nlohmann::json to_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json a = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rs) {
        a.push_back(to_json(r));
        all = all && r.pass;
    }
    return {{"criteria", a}, {"pass", all}};
}

}  // namespace knotspan::acceptance
