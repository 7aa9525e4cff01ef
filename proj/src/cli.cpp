#include "asl/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "asl/contour.hpp"
#include "asl/fubini.hpp"
#include "asl/residuals.hpp"
#include "asl/solver.hpp"
#include "asl/soliton.hpp"
#include "asl/transforms.hpp"

namespace asl {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw usage_error("cannot open output file '" + path + "'");
    return f;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- domains ----------------------------------------------------------------

void run_domains(const std::string& domain_token, const std::string& polygon_token,
                 int samples, const std::string& out_path, std::ostream& out) {
    if (domain_token.empty() && polygon_token.empty())
        throw usage_error("domains: give --domain or --polygon");

    ordered_json j;
    if (!domain_token.empty()) {
        const Domain& dom = Domain::omega(parse_domain_token(domain_token));
        std::ofstream csv;
        if (!out_path.empty()) csv = open_output(out_path);

        j["domain"] = domain_token;
        j["pieces"] = int(dom.pieces().size());
        j["boundary_length"] = dom.boundary_length();
        const auto bb = dom.bounding_box();
        j["bbox"] = {{bb[0].x, bb[0].y}, {bb[1].x, bb[1].y}};
        ordered_json cs = ordered_json::array();
        for (const Vec2 c : dom.corners()) cs.push_back({c.x, c.y});
        j["corners"] = cs;
        j["samples"] = samples;
        j["csv"] = out_path.empty() ? ordered_json(nullptr) : ordered_json(out_path);

        if (!out_path.empty()) {
            csv << "s,t,piece,nx,ny\n";
            for (const auto& b : dom.boundary_samples(samples))
                csv << num(b.point.x) << ',' << num(b.point.y) << ',' << b.piece << ','
                    << num(b.outward_normal.x) << ',' << num(b.outward_normal.y) << '\n';
        }
    }
    if (!polygon_token.empty()) {
        const Polytope& box = Polytope::square(parse_polytope_token(polygon_token));
        ordered_json p;
        p["name"] = polygon_token;
        ordered_json vs = ordered_json::array();
        for (const Vec2 v : box.vertices()) vs.push_back({v.x, v.y});
        p["vertices"] = vs;
        j["polygon"] = p;
    }
    out << j.dump(2) << "\n";
}

// ---- verify -----------------------------------------------------------------

int case_index(const std::string& name) {
    if (name == "p2") return 1;
    if (name == "p1xp1") return 2;
    throw usage_error("unknown case '" + name + "' (expected p2|p1xp1)");
}

void run_verify(const std::string& case_name, int grid, std::ostream& out) {
    const int j = case_index(case_name);
    const Field2& h = h_field(j);
    const Poly2& H = H_poly(j);
    const Polytope& box = Polytope::square(j);
    const Domain& dom = Domain::omega(j);

    double res21 = 0.0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const Vec2 p{-5.0 + 10.0 * a / (grid - 1.0), -5.0 + 10.0 * b / (grid - 1.0)};
            res21 = std::max(res21, std::abs(residual_eq21(h, p)));
        }

    double res211 = 0.0;
    const auto bbox = box.bounding_box();
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const Vec2 p{bbox[0].x + (bbox[1].x - bbox[0].x) * a / (grid - 1.0),
                         bbox[0].y + (bbox[1].y - bbox[0].y) * b / (grid - 1.0)};
            if (!box.contains(p)) continue;
            res211 = std::max(res211, std::abs(residual_eq211(H, p)));
        }

    // pulled-back residuals on an inset interior lattice (min rho >= 0.01)
    const PsiComposite psi(j);
    const PhiOfPsiField phi(psi);
    double res13 = 0.0, res11 = 0.0;
    const auto dbb = dom.bounding_box();
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const Vec2 p{dbb[0].x + (dbb[1].x - dbb[0].x) * a / (grid - 1.0),
                         dbb[0].y + (dbb[1].y - dbb[0].y) * b / (grid - 1.0)};
            if (dom.min_rho(p) < 0.01) continue;
            res13 = std::max(res13, std::abs(residual_eq13(psi, p)));
            res11 = std::max(res11, std::abs(residual_eq11(phi, 0.5, p)));
        }

    ordered_json out_json;
    out_json["case"] = case_name;
    out_json["grid"] = grid;
    out_json["res_21"] = res21;
    out_json["res_211"] = res211;
    out_json["res_13"] = res13;
    out_json["res_11"] = res11;
    out << out_json.dump(2) << "\n";
}

// ---- transform ----------------------------------------------------------

void run_transform(const std::string& case_name, int grid, const std::string& emit,
                   const std::string& out_path) {
    const int j = case_index(case_name);
    std::ofstream csv = open_output(out_path);
    csv << "s,t,value\n";

    MeshField dual;
    if (emit == "psi") {
        dual = legendre_dual(sample_on_polytope(H_poly(j), Polytope::square(j), grid));
    } else if (emit == "hstar") {
        // the Kaehler potential lives on the whole plane; an 8-wide window
        // already maps onto almost all of the moment polygon
        LatticeField L;
        L.origin = {-8.0, -8.0};
        L.step = 16.0 / grid;
        L.nx = L.ny = grid + 1;
        L.value.assign(std::size_t(L.nx) * L.ny, 0.0);
        L.mask.assign(std::size_t(L.nx) * L.ny, 1);
        for (int b = 0; b < L.ny; ++b)
            for (int a = 0; a < L.nx; ++a)
                L.value[L.idx(a, b)] = h_field(j).value(L.point(a, b));
        dual = legendre_dual(L);
    } else {
        throw usage_error("transform: --emit must be psi or hstar");
    }

    for (int b = 0; b < dual.ny; ++b)
        for (int a = 0; a < dual.nx; ++a) {
            if (!dual.has(a, b)) continue;
            const Vec2 p = dual.point[dual.idx(a, b)];
            csv << num(p.x) << ',' << num(p.y) << ',' << num(dual.value[dual.idx(a, b)])
                << '\n';
        }
}

// ---- solve --------------------------------------------------------------

void write_solve_csv(std::ostream& csv, const SolveReport& rep) {
    csv << "s,t,psi\n";
    const Grid& g = *rep.grid;
    for (std::size_t i = 0; i < g.nodes().size(); ++i)
        csv << num(g.nodes()[i].p.x) << ',' << num(g.nodes()[i].p.y) << ','
            << num(rep.value[i]) << '\n';
    for (const auto& b : g.boundary_nodes())
        csv << num(b.p.x) << ',' << num(b.p.y) << ',' << num(0.0) << '\n';
}

ordered_json report_json(const std::string& domain_token, const SolveReport& rep) {
    ordered_json j;
    j["domain"] = domain_token;
    j["grid"] = rep.grid_n;
    j["k"] = rep.k;
    j["iterations"] = rep.iterations;
    j["residual_inf"] = rep.residual_inf;
    j["min_psi"] = rep.min_value;
    j["trace"] = rep.trace;
    return j;
}

void run_solve(const std::string& domain_token, int grid, double k,
               const std::string& out_path, const std::string& report_path,
               std::ostream& out) {
    const Domain& dom = Domain::omega(parse_domain_token(domain_token));
    std::ofstream csv, rj;
    if (!out_path.empty()) csv = open_output(out_path);
    if (!report_path.empty()) rj = open_output(report_path);

    SolverConfig cfg;
    cfg.grid_n = grid;
    const SolveReport rep =
        (std::abs(k - 0.5) < 1e-12) ? solve_psi(dom, cfg) : solve_phi(dom, k, cfg);

    if (!out_path.empty()) write_solve_csv(csv, rep);
    const ordered_json j = report_json(domain_token, rep);
    if (!report_path.empty())
        rj << j.dump(2) << "\n";
    else
        out << j.dump(2) << "\n";
}

// ---- fubini-pick ----------------------------------------------------------

void run_fubini(const std::string& domain_token, const std::string& source, int grid,
                int points, const std::string& out_path, std::ostream& err) {
    const int jd = parse_domain_token(domain_token);
    const Domain& dom = Domain::omega(jd);
    std::ofstream csv = open_output(out_path);

    ScalarField field;
    std::vector<double> depths;
    std::shared_ptr<PsiComposite> analytic;
    std::shared_ptr<SolveReport> solved;
    if (source == "exact") {
        if (jd == 3)
            throw usage_error("fubini-pick: no closed form exists for omega3, use --source solve");
        analytic = std::make_shared<PsiComposite>(jd);
        field = [analytic](Vec2 p) { return analytic->value(p); };
        depths = default_analytic_depths(dom);
    } else if (source == "solve") {
        SolverConfig cfg;
        cfg.grid_n = grid;
        solved = std::make_shared<SolveReport>(solve_psi(dom, cfg));
        field = [solved](Vec2 p) { return grid_interpolate(*solved->grid, solved->value, p); };
        depths = default_grid_depths(solved->grid->step());
    } else {
        throw usage_error("fubini-pick: --source must be exact or solve");
    }

    csv << "s,t,piece,a1,f,fit_residual\n";
    for (const auto& e : profile_boundary(field, dom, points, depths)) {
        if (!e.ok) {
            err << "warning: skipped (" << num(e.coef.point.x) << "," << num(e.coef.point.y)
                << "): " << e.error << "\n";
            continue;
        }
        csv << num(e.coef.point.x) << ',' << num(e.coef.point.y) << ',' << e.coef.piece
            << ',' << num(e.coef.a1) << ',' << num(e.coef.f) << ','
            << num(e.coef.fit_residual) << '\n';
    }
}

// ---- soliton-alpha -------------------------------------------------------

void run_soliton(std::vector<double> bracket, std::ostream& out) {
    if (bracket.empty()) {
        const auto [lo, hi] = scan_alpha_bracket();
        bracket = {lo, hi};
    }
    if (bracket.size() != 2) throw usage_error("soliton-alpha: --bracket takes two numbers");
    const SolitonAlpha s = solve_alpha(bracket[0], bracket[1]);
    ordered_json j;
    j["alpha"] = s.alpha;
    j["residual"] = s.residual;
    j["bracket"] = {s.bracket_lo, s.bracket_hi};
    out << j.dump(2) << "\n";
}

// ---- export-contour --------------------------------------------------------

void run_contour(const std::string& field_path, const std::vector<double>& levels,
                 const std::string& out_path, const std::string& domain_token,
                 std::ostream& err) {
    std::ofstream svg = open_output(out_path);
    const FieldCsv f = read_field_csv(field_path);
    const Domain* dom = domain_token.empty() ? nullptr
                                             : &Domain::omega(parse_domain_token(domain_token));
    std::vector<double> missing;
    svg << contour_svg(f, levels, dom, &missing);
    for (double lv : missing)
        err << "warning: level " << lv << " produced no contour (outside the field range)\n";
}

} // namespace

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monge-Ampere boundary-value problems on piecewise-quadratic convex "
                 "domains: closed-form checks, solver, boundary invariants"};
    app.name("asl");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (affects wall time only)")
        ->envname("ASL_THREADS");

    // domains
    auto* cd = app.add_subcommand("domains", "domain geometry and boundary samples");
    std::string cd_domain, cd_polygon, cd_out;
    int cd_samples = 256;
    cd->add_option("--domain", cd_domain, "omega1|omega2|omega3");
    cd->add_option("--polygon", cd_polygon, "square1|square2|square3");
    cd->add_option("--samples", cd_samples, "boundary sample count")->default_val(256);
    cd->add_option("--out", cd_out, "boundary CSV path (s,t,piece,nx,ny)");

    // verify
    auto* cv = app.add_subcommand("verify", "max residuals of the closed forms");
    std::string cv_case;
    int cv_grid = 50;
    cv->add_option("--case", cv_case, "p2|p1xp1")->required();
    cv->add_option("--grid", cv_grid, "lattice resolution")->default_val(50);

    // transform
    auto* ct = app.add_subcommand("transform", "grid Legendre transforms");
    std::string ct_case, ct_emit = "psi", ct_out;
    int ct_grid = 128;
    ct->add_option("--case", ct_case, "p2|p1xp1")->required();
    ct->add_option("--grid", ct_grid, "lattice resolution")->default_val(128);
    ct->add_option("--emit", ct_emit, "psi|hstar")->default_val("psi");
    ct->add_option("--out", ct_out, "output CSV (s,t,value)")->required();

    // solve
    auto* cs = app.add_subcommand("solve", "solve the dual boundary-value problem");
    std::string cs_domain, cs_out, cs_report;
    int cs_grid = 64;
    double cs_k = 0.5;
    cs->add_option("--domain", cs_domain, "omega1|omega2|omega3")->required();
    cs->add_option("--grid", cs_grid, "cells across the bounding box")->default_val(64);
    cs->add_option("--k", cs_k, "exponent of the primal equation")->default_val(0.5);
    cs->add_option("--out", cs_out, "field CSV (s,t,psi)");
    cs->add_option("--report", cs_report, "JSON report path");

    // fubini-pick
    auto* cf = app.add_subcommand("fubini-pick", "boundary expansion coefficients");
    std::string cf_domain, cf_source, cf_out;
    int cf_grid = 128, cf_points = 64;
    cf->add_option("--domain", cf_domain, "omega1|omega2|omega3")->required();
    cf->add_option("--source", cf_source, "exact|solve")->required();
    cf->add_option("--grid", cf_grid, "solver resolution for --source solve")->default_val(128);
    cf->add_option("--points", cf_points, "boundary sample count")->default_val(64);
    cf->add_option("--out", cf_out, "output CSV")->required();

    // soliton-alpha
    auto* ca = app.add_subcommand("soliton-alpha", "root of the soliton compatibility equation");
    std::vector<double> ca_bracket;
    ca->add_option("--bracket", ca_bracket, "lo hi")->expected(2);

    // export-contour
    auto* ce = app.add_subcommand("export-contour", "marching-squares SVG from a field CSV");
    std::string ce_field, ce_out, ce_domain;
    std::vector<double> ce_levels;
    ce->add_option("--field", ce_field, "input CSV (s,t,value)")->required();
    ce->add_option("--levels", ce_levels, "contour levels")->delimiter(',');
    ce->add_option("--out", ce_out, "output SVG")->required();
    ce->add_option("--domain", ce_domain, "domain for the boundary outline");

    app.require_subcommand(1);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (threads > 0) par::set_threads(threads);
        if (cd->parsed()) run_domains(cd_domain, cd_polygon, cd_samples, cd_out, out);
        if (cv->parsed()) run_verify(cv_case, cv_grid, out);
        if (ct->parsed()) run_transform(ct_case, ct_grid, ct_emit, ct_out);
        if (cs->parsed()) run_solve(cs_domain, cs_grid, cs_k, cs_out, cs_report, out);
        if (cf->parsed()) run_fubini(cf_domain, cf_source, cf_grid, cf_points, cf_out, err);
        if (ca->parsed()) run_soliton(ca_bracket, out);
        if (ce->parsed()) run_contour(ce_field, ce_levels, ce_out, ce_domain, err);
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace asl
