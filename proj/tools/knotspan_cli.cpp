// knotspan: single binary driving every module.
// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input or usage.

#include "knotspan/acceptance.hpp"
#include "knotspan/deform.hpp"
#include "knotspan/disks.hpp"
#include "knotspan/families.hpp"
#include "knotspan/inscribe.hpp"
#include "knotspan/plmesh.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

using namespace knotspan;
using nlohmann::json;

namespace {

struct RunConfig {
    std::uint64_t seed = 0;
    Tolerance tol;
    std::string out;
    std::string report;
};

struct Result {
    bool ok = false;
    json report;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cli", "cannot write " + path);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

curves::CurveFile load_curve(const std::string& path) { return curves::read_curve_file(path); }

const curves::SampledCurve& need_sampled(const curves::CurveFile& f, const std::string& path) {
    if (!f.sampled) throw InputError("cli", path + " must hold a sampled curve");
    return *f.sampled;
}

const curves::PolygonalCurve& need_polygon(const curves::CurveFile& f, const std::string& path) {
    if (!f.polygon) throw InputError("cli", path + " must hold a polygonal curve");
    return *f.polygon;
}

Result curves_analyze(const RunConfig& cfg, const std::string& path) {
    const auto f = load_curve(path);
    Result r;
    json& j = r.report;
    j["command"] = "curves analyze";
    j["kind"] = f.kind;
    if (f.polygon) {
        const auto& p = *f.polygon;
        j["edges"] = p.edge_count();
        j["length"] = curves::length(p);
        j["axis_distance"] = curves::distance_to_y_axis(p);
        const bool emb = curves::is_embedded(p, cfg.tol);
        j["embedded"] = emb;
        r.ok = emb;
    } else {
        const auto& c = *f.sampled;
        const auto th = curves::thickness(c, cfg.tol);
        const bool emb = curves::is_embedded(c, cfg.tol);
        const bool consistent = curves::max_curvature_vs_thickness_check(c, th);
        j["samples"] = c.size();
        j["length"] = curves::length(c);
        j["axis_distance"] = curves::distance_to_y_axis(c);
        j["dense"] = c.is_dense();
        j["embedded"] = emb;
        j["thickness"] = curves::to_json(th);
        j["curvature_vs_thickness"] = consistent;
        r.ok = emb && consistent;
    }
    return r;
}

std::optional<double> opt_r(double r) { return r > 0 ? std::optional<double>(r) : std::nullopt; }

double radius_for(const curves::SampledCurve& c, std::optional<double> r, const Tolerance& tol) {
    return r ? *r : curves::thickness(c, tol).r;
}

Result inscribe_cmd(const RunConfig& cfg, const std::string& path, std::optional<double> r_opt) {
    const auto& f = load_curve(path);
    const auto& c = need_sampled(f, path);
    const double r = radius_for(c, r_opt, cfg.tol);
    const auto ip = inscribe::inscribe_polygon(c, r, cfg.tol);
    const auto cones = inscribe::necklace_cones(ip);
    const auto nr = inscribe::check_necklace(ip, cones, cfg.tol);
    Result res;
    res.ok = nr.ok();
    res.report = {{"command", "inscribe"}, {"r", r}, {"n", ip.n}, {"a", ip.a_values}, {"necklace", inscribe::to_json(nr)}};
    if (!cfg.out.empty())
        write_text(cfg.out, dump({{"polygon", curves::to_json(ip.polygon())}, {"cones", inscribe::to_json(cones)}}));
    return res;
}

Result deform_cmd(const RunConfig& cfg, const std::string& path, std::optional<double> r_opt) {
    const auto& f = load_curve(path);
    const auto& c = need_sampled(f, path);
    const double r = radius_for(c, r_opt, cfg.tol);
    const auto ip = inscribe::inscribe_polygon(c, r, cfg.tol);
    const auto cones = inscribe::build_cone_necklace(ip, cfg.tol);
    const auto nm = deform::build_necklace_map(ip, cones, cfg.tol);
    const auto flat = deform::flat_necklace_mesh(ip, cones, 8, cfg.tol);
    const auto [out, rep] = deform::necklace_map_mesh(nm, flat, ip.base, cfg.tol);
    Result res;
    res.ok = rep.ratio <= 25.0 && rep.max_boundary_residual <= cfg.tol.eps_len;
    res.report = {{"command", "deform"}, {"r", r}, {"n", ip.n}, {"triangles", out.faces.size()},
                  {"deform", deform::to_json(rep)}};
    if (!cfg.out.empty()) mesh::write_off(out, cfg.out);
    return res;
}

Result plmesh_build(const RunConfig& cfg, const std::string& path) {
    const auto f = load_curve(path);
    const auto& p = need_polygon(f, path);
    const auto b = plmesh::build_ball_triangulation(p, cfg.seed, cfg.tol);
    const auto rep = plmesh::validate_tetmesh(b, p, cfg.tol);
    Result res;
    res.ok = rep.ok();
    res.report = {{"command", "plmesh build"}, {"seed", cfg.seed},  {"polygon_size", b.polygon_size},
                  {"crossings", b.crossings},  {"frame_trial", b.frame_trial}, {"validation", plmesh::to_json(rep)}};
    if (!cfg.out.empty()) {
        std::ofstream o(cfg.out, std::ios::binary);
        if (!o) throw InputError("cli", "cannot write " + cfg.out);
        plmesh::write_tet(b, o);
    }
    return res;
}

Result families_gen(const RunConfig& cfg, const std::string& family, std::size_t n) {
    const auto f = families::family_from_string(family);
    json curve;
    families::FamilyReport rep;
    if (f == families::Family::Kn) {
        const auto k = families::generate_Kn(n);
        rep = families::verify_family(k.curve, n);
        curve = families::to_json(k);
    } else {
        const auto s = f == families::Family::Delta ? families::generate_Delta(n) : families::generate_Gamma(n);
        rep = families::verify_family(s.curve, f, n);
        curve = curves::to_json(s.curve);
        curve["family"] = families::to_string(f);
        curve["n"] = n;
        curve["raw_length"] = s.raw_length;
        if (f == families::Family::Delta) curve["hausdorff_to_kn"] = s.hausdorff_to_kn;
    }
    Result res;
    res.ok = rep.ok();
    res.report = families::to_json(rep);
    res.report["command"] = "families gen";
    if (!cfg.out.empty()) {
        write_text(cfg.out, dump(curve));
    } else if (cfg.report.empty()) {
        // No artifact path: the curve itself is the output, report attached.
        curve["report"] = res.report;
        res.report = curve;
    }
    return res;
}

Result disks_certify(const RunConfig& cfg, const std::string& mesh, double r0, std::size_t n, std::size_t res_cells) {
    const auto sd = disks::read_disk(mesh);
    const auto dr = disks::check_disk(sd, cfg.tol);
    const auto cert = disks::cylinder_area_certificate(sd, r0, n, res_cells, cfg.seed, cfg.tol);
    Result res;
    res.ok = cert.sound && dr.ok();
    res.report = {{"command", "disks certify"}, {"seed", cfg.seed}, {"disk", disks::to_json(dr)},
                  {"certificate", disks::to_json(cert)}};
    return res;
}

Result disks_minimize(const RunConfig& cfg, const std::string& mesh, std::size_t iters) {
    const auto sd = disks::read_disk(mesh);
    const auto mr = disks::minimize_area(sd, iters, {}, cfg.tol);
    bool monotone = true;
    for (std::size_t i = 1; i < mr.area_log.size(); ++i) monotone = monotone && mr.area_log[i] <= mr.area_log[i - 1];
    const double angle = disks::min_angle_deg(mr.disk.mesh);
    Result res;
    res.ok = monotone && angle >= disks::MinimizeOptions{}.min_angle_deg;
    res.report = {{"command", "disks minimize"},
                  {"monotone", monotone},
                  {"min_angle_deg", angle},
                  {"isoperimetric_ratio", disks::isoperimetric_ratio(mr.disk)},
                  {"minimize", disks::to_json(mr)}};
    if (!cfg.out.empty()) mesh::write_off(mr.disk.mesh, cfg.out);
    return res;
}

Result verify_all(const RunConfig& cfg) {
    const auto rs = acceptance::run_all(cfg.seed);
    Result res;
    res.report = acceptance::to_json(rs);
    res.ok = res.report["pass"].get<bool>();
    if (!cfg.report.empty())
        for (const auto& r : rs) std::cout << acceptance::format_line(r) << "\n";
    return res;
}

int fail_json(const std::string& type, const std::string& stage, const std::string& message, int code) {
    std::cerr << json{{"error", {{"type", type}, {"stage", stage}, {"message", message}}}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knotspan: unknot spanning-disk toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.option_defaults()->always_capture_default();
    app.add_option("--seed", cfg.seed, "seed for every random choice");
    app.add_option("--eps-len", cfg.tol.eps_len, "length tolerance");
    app.add_option("--eps-ang", cfg.tol.eps_ang, "angle tolerance");
    app.add_option("--out", cfg.out, "artifact path");
    app.add_option("--report", cfg.report, "report path (default: standard output)");

    std::string curve_path, mesh_path, family;
    double r = 0.0, r0 = 0.01;
    std::size_t n = 1, iters = 500, resolution = 256;
    std::function<Result()> job;

    auto* curves_cmd = app.add_subcommand("curves", "curve analysis")->require_subcommand(1);
    auto* analyze = curves_cmd->add_subcommand("analyze", "thickness and embeddedness report");
    analyze->add_option("curve", curve_path, "curve JSON")->required();
    analyze->callback([&] { job = [&] { return curves_analyze(cfg, curve_path); }; });

    auto* ins = app.add_subcommand("inscribe", "inscribed polygon and cone necklace");
    ins->add_option("curve", curve_path, "sampled curve JSON")->required();
    ins->add_option("--r", r, "radius; defaults to the measured thickness");
    ins->callback([&] { job = [&] { return inscribe_cmd(cfg, curve_path, opt_r(r)); }; });

    auto* def = app.add_subcommand("deform", "necklace map of the flat spanning mesh");
    def->add_option("curve", curve_path, "planar sampled curve JSON")->required();
    def->add_option("--r", r, "radius; defaults to the measured thickness");
    def->callback([&] { job = [&] { return deform_cmd(cfg, curve_path, opt_r(r)); }; });

    auto* pl = app.add_subcommand("plmesh", "ball triangulations")->require_subcommand(1);
    auto* build = pl->add_subcommand("build", "tetrahedral ball around a polygon");
    build->add_option("curve", curve_path, "polygonal curve JSON")->required();
    build->callback([&] { job = [&] { return plmesh_build(cfg, curve_path); }; });

    auto* fam = app.add_subcommand("families", "curve families")->require_subcommand(1);
    auto* gen = fam->add_subcommand("gen", "generate one member");
    gen->add_option("--family", family, "kn, delta or gamma")->required();
    gen->add_option("--n", n, "index")->required();
    gen->callback([&] { job = [&] { return families_gen(cfg, family, n); }; });

    auto* dk = app.add_subcommand("disks", "spanning disks")->require_subcommand(1);
    auto* cert = dk->add_subcommand("certify", "cylinder area certificate");
    cert->add_option("--mesh", mesh_path, "OFF mesh")->required();
    cert->add_option("--r0", r0, "cylinder radius");
    cert->add_option("--n", n, "family index for the reference value");
    cert->add_option("--resolution", resolution, "grid cells per side");
    cert->callback([&] { job = [&] { return disks_certify(cfg, mesh_path, r0, n, resolution); }; });
    auto* mini = dk->add_subcommand("minimize", "area descent with fixed boundary");
    mini->add_option("--mesh", mesh_path, "OFF mesh")->required();
    mini->add_option("--iters", iters, "iteration cap");
    mini->callback([&] { job = [&] { return disks_minimize(cfg, mesh_path, iters); }; });

    auto* va = app.add_subcommand("verify-all", "run the acceptance suite");
    va->callback([&] { job = [&] { return verify_all(cfg); }; });

    for (auto* sub : {curves_cmd, analyze, ins, def, pl, build, fam, gen, dk, cert, mini, va}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail_json("usage", "cli", e.what(), 2);
    }

    try {
        cfg.tol.validate();
        const Result res = job();
        if (cfg.report.empty())
            std::cout << dump(res.report);
        else
            write_text(cfg.report, dump(res.report));
        return res.ok ? 0 : 1;
    } catch (const InputError& e) {
        return fail_json("input", e.stage(), e.what(), 2);
    } catch (const json::exception& e) {
        return fail_json("input", "json", e.what(), 2);
    } catch (const Error& e) {
        return fail_json("check", e.stage(), e.what(), 1);
    } catch (const std::exception& e) {
        return fail_json("internal", "cli", e.what(), 1);
    }
}
