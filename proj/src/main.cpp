// Command-line front end: quadrisecant enumeration, quadrisecant
// approximation, geometric measures, length-bound constants, scene export.
//
// Exit codes: 0 success, 2 non-generic input (re-run with --perturb),
// 3 validation failure (files, flags, malformed data), 4 empty domain
// (no quadrisecants where some are required).

#include "knotsec/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace knotsec;

namespace {

struct RunConfig {
    std::string input;
    uint64_t seed = 1;
    int threads = 1;
    double perturb = 0;  // 0 = off
    std::string format = "json";
    std::string export_path;
    int timebox_ms = 200;
    bool skip_essential = false;
    bool theta_loops = false;
    double distortion_tol = 0.01;
    int bridge_dirs = 64;
    ToleranceConfig tol;
};

// input is either a file path or "builtin:family[:n[:p:q]]"
PolygonalKnot resolve_input(const RunConfig& cfg) {
    const std::string& in = cfg.input;
    if (in.rfind("builtin:", 0) != 0) return load_knot(in, cfg.tol);
    std::vector<std::string> parts;
    std::stringstream ss(in);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    // parts[0] == "builtin"
    if (parts.size() < 2) throw IoError("builtin spec needs a family name");
    std::string family = parts[1];
    int n = 0;
    BuiltinParams bp;
    try {
        if (parts.size() >= 3) n = std::stoi(parts[2]);
        if (parts.size() >= 4) bp.p = std::stoi(parts[3]);
        if (parts.size() >= 5) bp.q = std::stoi(parts[4]);
    } catch (const std::exception&) {
        throw IoError("builtin spec: numeric fields must be integers");
    }
    if (n == 0) {
        if (family == "hexagonal_trefoil") n = 6;
        else if (family == "round_circle") n = 64;
        else n = 40;
    }
    return builtin_knot(family, bp, n);
}

PolygonalKnot prepare_knot(const RunConfig& cfg) {
    PolygonalKnot K = resolve_input(cfg);
    if (cfg.perturb > 0)
        K = perturb_to_generic(K, cfg.perturb, cfg.seed, cfg.tol);
    return K;
}

void emit(const RunConfig& cfg, const ordered_json& report,
          const std::vector<std::string>& csv_lines) {
    if (cfg.format == "csv") {
        for (const auto& l : csv_lines) std::cout << l << "\n";
    } else {
        std::cout << report.dump(2) << "\n";
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

long long quad_count_bound(int n) {
    return static_cast<long long>(n) * (n - 3) * (n - 4) * (n - 5) / 12;
}

int cmd_quadrisecants(const RunConfig& cfg) {
    PolygonalKnot K = prepare_knot(cfg);
    ToleranceConfig tol = cfg.tol;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);

    GenericityReport gen = check_genericity_local(K, tol);
    EnumerationOptions opts;
    opts.threads = cfg.threads;
    std::vector<Quadrisecant> quads;
    bool five_secant = false;
    std::string five_msg;
    try {
        quads = enumerate_quadrisecants(K, tol, opts);
    } catch (const FiveSecantDetected& e) {
        five_secant = true;
        five_msg = e.what();
        gen.n_secant_excess.push_back(e.edges);
        gen.is_generic = false;
    }
    if (!gen.is_generic) {
        ordered_json j;
        j["schema"] = 1;
        j["command"] = "quadrisecants";
        j["knot"] = {{"name", K.name()}, {"n_vertices", K.size()}};
        j["genericity"] = genericity_to_json(gen);
        if (five_secant) j["error"] = five_msg;
        std::cout << j.dump(2) << "\n";
        std::cerr << "input is not generic; re-run with --perturb <magnitude> "
                     "(try --perturb 1e-4)\n";
        return 2;
    }

    if (!cfg.skip_essential && !quads.empty()) {
        ComplementModel model =
            ComplementModel::build(K.vertices(), tol, cfg.seed, cfg.timebox_ms);
        CertifyOptions copts;
        copts.timebox_ms = cfg.timebox_ms;
        copts.seed = cfg.seed;
        for (auto& q : quads)
            q = essential_quadrisecant_check(K, q, model, tol, copts);
    }

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "quadrisecants";
    j["knot"] = {{"name", K.name()}, {"n_vertices", K.size()}};
    j["genericity"] = genericity_to_json(gen);
    long long bound = quad_count_bound(K.size());
    j["count"] = quads.size();
    j["count_bound"] = {{"bound", bound},
                        {"ok", static_cast<long long>(quads.size()) <= bound}};
    if (K.unknotting_number()) {
        long long u = *K.unknotting_number();
        j["pannwitz"] = {{"unknotting_number", u},
                         {"floor", 2 * u * u},
                         {"ok", static_cast<long long>(quads.size()) >=
                                    2 * u * u}};
    }
    ordered_json qs = ordered_json::array();
    for (const auto& q : quads) qs.push_back(quadrisecant_to_json(q));
    j["quadrisecants"] = std::move(qs);

    std::vector<std::string> csv;
    csv.push_back(
        "index,class,a_edge,a_t,b_edge,b_t,c_edge,c_t,d_edge,d_t,r,s,t,"
        "essential");
    for (size_t i = 0; i < quads.size(); ++i) {
        const auto& q = quads[i];
        std::ostringstream row;
        row << i << "," << to_string(q.dihedral_class);
        for (const KnotPoint* p : {&q.a, &q.b, &q.c, &q.d})
            row << "," << p->edge_index << "," << fmt(p->t);
        row << "," << fmt(q.r) << "," << fmt(q.s) << "," << fmt(q.t) << ","
            << to_string(q.essential);
        csv.push_back(row.str());
    }
    emit(cfg, j, csv);

    if (!cfg.export_path.empty()) {
        std::ofstream os(cfg.export_path);
        if (!os) throw IoError("cannot write export file: " + cfg.export_path);
        write_obj(os, K, quads);
    }
    return 0;
}

int cmd_approx(const RunConfig& cfg) {
    PolygonalKnot K = prepare_knot(cfg);
    ToleranceConfig tol = cfg.tol;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    EnumerationOptions opts;
    opts.threads = cfg.threads;

    QuadApprox A = quadrisecant_approximation(K, tol, opts, cfg.seed);
    ConjectureReport rep = conjecture_report(A, K, tol, cfg.seed);

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "approx";
    j["knot"] = {{"name", K.name()}, {"n_vertices", K.size()}};
    j["cut_points"] = A.cut_points.size();
    j["verdict"] = conjecture_to_json(rep);
    if (A.signature) {
        j["approx_signature"] = {{"alexander", A.signature->alexander},
                                 {"determinant", A.signature->determinant}};
    }
    // built by hand: a non-embedded approximation is still reported, and the
    // PolygonalKnot constructor would reject it
    ordered_json hat;
    hat["schema"] = 1;
    hat["name"] = K.name() + "_approx";
    ordered_json hverts = ordered_json::array();
    for (const auto& p : A.polyline) hverts.push_back(point_to_json(p));
    hat["vertices"] = std::move(hverts);
    j["approximation"] = hat;

    std::vector<std::string> csv;
    csv.push_back("field,value");
    csv.push_back("embedded," + std::to_string(int(rep.embedded)));
    csv.push_back("same_signature," + std::to_string(int(rep.same_signature)));
    csv.push_back("same_quadrisecant_set," +
                  std::to_string(int(rep.same_quadrisecant_set)));
    csv.push_back("source_quadrisecants," + std::to_string(rep.source_count));
    csv.push_back("approx_quadrisecants," + std::to_string(rep.approx_count));
    emit(cfg, j, csv);

    if (!cfg.export_path.empty()) {
        std::ofstream os(cfg.export_path);
        if (!os) throw IoError("cannot write export file: " + cfg.export_path);
        os << hat.dump(2) << "\n";
    }
    return 0;
}

int cmd_measures(const RunConfig& cfg) {
    PolygonalKnot K = prepare_knot(cfg);
    MeasureReport rep =
        measure_report(K, cfg.distortion_tol, cfg.bridge_dirs, cfg.seed);

    // second-hull probes: knot centroid at orders 1 and 2
    Point3 centroid{0, 0, 0};
    for (const auto& p : K.vertices()) centroid = centroid + p;
    centroid = centroid / static_cast<double>(K.size());
    ordered_json hull_samples = ordered_json::array();
    for (int order : {1, 2}) {
        ordered_json s;
        s["point"] = point_to_json(centroid);
        s["order"] = order;
        try {
            s["result"] =
                second_hull_to_json(second_hull_membership(K, centroid, order));
        } catch (const PointOnKnot&) {
            s["result"] = "point_on_knot";
        }
        hull_samples.push_back(std::move(s));
    }

    ordered_json j;
    j["schema"] = 1;
    j["command"] = "measures";
    j["knot"] = {{"name", K.name()}, {"n_vertices", K.size()}};
    j["measures"] = measure_report_to_json(rep);
    j["second_hull_samples"] = std::move(hull_samples);

    std::vector<std::string> csv;
    csv.push_back("field,value");
    csv.push_back("total_curvature," + fmt(rep.total_curvature));
    csv.push_back("thickness," +
                  (rep.thickness_degenerate ? "degenerate" : fmt(rep.thickness)));
    csv.push_back("ropelength," +
                  (rep.thickness_degenerate ? "degenerate" : fmt(rep.ropelength)));
    csv.push_back("distortion_lo," + fmt(rep.distortion.lo));
    csv.push_back("distortion_hi," + fmt(rep.distortion.hi));
    csv.push_back("superbridge_estimate," +
                  std::to_string(rep.superbridge_estimate));
    emit(cfg, j, csv);
    return 0;
}

int cmd_bounds(const RunConfig& cfg) {
    ordered_json rows = ordered_json::array();
    std::vector<std::string> csv;
    csv.push_back("class,value,r,s,t");
    for (auto [cls, name] :
         {std::pair{DihedralClass::Simple, "simple"},
          std::pair{DihedralClass::Flipped, "flipped"},
          std::pair{DihedralClass::Alternating, "alternating"}}) {
        BoundMinimum m = minimize_bound(cls, cfg.tol.opt_tol);
        ordered_json r;
        r["class"] = name;
        r["value"] = m.value;
        r["argmin"] = {{"r", m.r}, {"s", m.s}, {"t", m.t}};
        rows.push_back(std::move(r));
        csv.push_back(std::string(name) + "," + fmt(m.value) + "," + fmt(m.r) +
                      "," + fmt(m.s) + "," + fmt(m.t));
    }
    ordered_json j;
    j["schema"] = 1;
    j["command"] = "bounds";
    j["bounds"] = std::move(rows);
    emit(cfg, j, csv);
    return 0;
}

int cmd_export(const RunConfig& cfg) {
    PolygonalKnot K = prepare_knot(cfg);
    ToleranceConfig tol = cfg.tol;
    tol.scene_diameter = std::max(K.diameter(), 1e-12);
    EnumerationOptions opts;
    opts.threads = cfg.threads;
    std::vector<Quadrisecant> quads = enumerate_quadrisecants(K, tol, opts);

    std::vector<std::vector<Point3>> loops;
    if (cfg.theta_loops) {
        for (const auto& q : quads) {
            try {
                ThetaGraph th = build_theta(K, q.b, q.c, 0, tol, cfg.seed);
                ParallelLoop pl =
                    parallel_with_zero_linking(th, tol, 0.25, cfg.seed);
                loops.push_back(pl.delta);
            } catch (const KnotError&) {
                // loop construction can honestly fail; the export just omits it
            } catch (const GeomError&) {
            }
        }
    }

    if (cfg.export_path.empty()) {
        write_obj(std::cout, K, quads, loops);
    } else {
        std::ofstream os(cfg.export_path);
        if (!os) throw IoError("cannot write export file: " + cfg.export_path);
        write_obj(os, K, quads, loops);
    }
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_input) {
    if (needs_input)
        sub->add_option("input", cfg.input,
                        "knot JSON file or builtin:family[:n[:p:q]]")
            ->required();
    sub->add_option("--seed", cfg.seed, "deterministic seed");
    sub->add_option("--threads", cfg.threads, "worker thread count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--perturb", cfg.perturb,
                    "perturbation magnitude applied before processing");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--export", cfg.export_path, "write scene/knot file here");
    sub->add_option("--timebox-ms", cfg.timebox_ms,
                    "essentiality search budget per secant (ms)");
    sub->add_option("--tol-skew", cfg.tol.tol_skew_rel, "skew-pair tolerance");
    sub->add_option("--tol-line", cfg.tol.tol_line, "line identity tolerance");
    sub->add_option("--tol-quadric", cfg.tol.tol_quadric, "quadric fit tolerance");
    sub->add_option("--tol-coplanar", cfg.tol.tol_coplanar,
                    "coplanarity tolerance");
    sub->add_option("--tol-collinear", cfg.tol.tol_collinear,
                    "collinearity tolerance");
    sub->add_option("--tol-embed", cfg.tol.tol_embed_rel,
                    "embeddedness clearance tolerance");
    sub->add_option("--tol-len", cfg.tol.tol_len, "length merge tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "polygonal knot geometry: quadrisecants, approximation, measures"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto* c_quads = app.add_subcommand(
        "quadrisecants", "enumerate and classify quadrisecants");
    add_common(c_quads, cfg, true);
    c_quads->add_flag("--skip-essential", cfg.skip_essential,
                      "skip essentiality certification");

    auto* c_approx =
        app.add_subcommand("approx", "quadrisecant approximation + verdict");
    add_common(c_approx, cfg, true);

    auto* c_meas = app.add_subcommand("measures", "geometric measures report");
    add_common(c_meas, cfg, true);
    c_meas->add_option("--distortion-tol", cfg.distortion_tol,
                       "distortion interval target width");
    c_meas->add_option("--bridge-dirs", cfg.bridge_dirs,
                       "sampled directions for bridge counts");

    auto* c_bounds =
        app.add_subcommand("bounds", "minimized length-bound constants");
    add_common(c_bounds, cfg, false);

    auto* c_export = app.add_subcommand("export", "OBJ scene export");
    add_common(c_export, cfg, true);
    c_export->add_flag("--theta-loops", cfg.theta_loops,
                       "include certification loops in the export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return 3;
    }

    try {
        if (c_quads->parsed()) return cmd_quadrisecants(cfg);
        if (c_approx->parsed()) return cmd_approx(cfg);
        if (c_meas->parsed()) return cmd_measures(cfg);
        if (c_bounds->parsed()) return cmd_bounds(cfg);
        if (c_export->parsed()) return cmd_export(cfg);
    } catch (const NoQuadrisecants& e) {
        std::cerr << "domain empty: " << e.what() << "\n";
        return 4;
    } catch (const FiveSecantDetected& e) {
        std::cerr << "not generic: " << e.what()
                  << "; re-run with --perturb <magnitude>\n";
        return 2;
    } catch (const CannotPerturb& e) {
        std::cerr << "not generic: " << e.what()
                  << "; try a different --perturb magnitude or --seed\n";
        return 2;
    } catch (const NotGeneric& e) {
        std::cerr << "not generic: " << e.what()
                  << "; re-run with --perturb <magnitude>\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return 3;
    } catch (const KnotError& e) {
        std::cerr << "validation: " << e.what() << "\n";
        return 3;
    } catch (const GeomError& e) {
        std::cerr << "degenerate geometry: " << e.what()
                  << "; re-run with --perturb <magnitude>\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
