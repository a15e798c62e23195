#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "mlab/acceptance.hpp"
#include "mlab/characters.hpp"
#include "mlab/connections.hpp"
#include "mlab/covers.hpp"
#include "mlab/errors.hpp"
#include "mlab/triangle.hpp"
#include "mlab/wkb.hpp"

#ifndef MLAB_VERSION
#define MLAB_VERSION "unknown"
#endif

using namespace mlab;
using nlohmann::json;

namespace {

struct RunConfig {
    int k = 3;
    std::string rho = "1/6";
    double tol = 1e-10;
    double rmin = 0.2;
    double tmin = 0.0;
    double tmax = 60.0;
    double step = 0.05;
    std::string side = "torus";
    std::string output;
    bool k_given = false;
    unsigned seed = 20240917;
};

// "p/q" or a decimal
double parse_fraction(const std::string& s) {
    auto slash = s.find('/');
    std::size_t used = 0;
    try {
        if (slash == std::string::npos) {
            double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } else {
            std::string a = s.substr(0, slash), b = s.substr(slash + 1);
            std::size_t ua = 0, ub = 0;
            double p = std::stod(a, &ua), q = std::stod(b, &ub);
            if (ua == a.size() && ub == b.size() && q != 0.0) return p / q;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("not a number or fraction: " + s);
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

json provenance(const RunConfig& c, const std::string& command) {
    return {{"version", MLAB_VERSION},
            {"command", command},
            {"config",
             {{"k", c.k}, {"rho", c.rho}, {"tol", c.tol}, {"rmin", c.rmin}, {"tmin", c.tmin}, {"tmax", c.tmax},
              {"step", c.step}, {"side", c.side}, {"seed", c.seed}}}};
}

// Writes to the output path, or stdout when none is given.
void emit(const RunConfig& c, const std::string& text) {
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + c.output + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + c.output);
}

TransportOptions transport_options(const RunConfig& c) {
    TransportOptions o;
    o.tol = c.tol;
    o.rmin = c.rmin;
    return o;
}

void validate(const RunConfig& c) {
    if (c.k < 2) throw ConfigError("--k must be at least 2");
    if (!(c.tol > 0.0 && c.tol < 1.0)) throw ConfigError("--tol must lie in (0, 1)");
    if (!(c.rmin > 0.0)) throw ConfigError("--rmin must be positive");
    if (!(c.step > 0.0)) throw ConfigError("--step must be positive");
    if (!(c.tmax >= c.tmin && c.tmin >= 0.0)) throw ConfigError("need 0 <= --tmin <= --tmax");
    if (c.tmax > FamilyEngine::max_t()) throw ConfigError("--tmax exceeds the supported range");
    double r = parse_fraction(c.rho);
    if (!(r > 0.0 && r < 0.5)) throw ConfigError("--rho must lie in (0, 1/2)");
    parse_side(c.side);
}

int cmd_verify(const RunConfig& c) {
    AcceptanceConfig cfg;
    cfg.k = c.k;
    cfg.tol = c.tol;
    cfg.rmin = c.rmin;
    cfg.seed = c.seed;
    auto results = run_acceptance(cfg, [](const CheckResult& r) {
        std::printf("%s\n", format_line(r).c_str());
        std::fflush(stdout);
    });
    bool ok = all_passed(results);
    std::printf("%s\n", ok ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED");
    if (!c.output.empty()) {
        json report = provenance(c, "verify");
        report["checks"] = to_json(results);
        report["passed"] = ok;
        emit(c, report.dump(2) + "\n");
    }
    return ok ? 0 : 1;
}

int cmd_scan(const RunConfig& c) {
    const double rho = parse_fraction(c.rho);
    ScanSide side = parse_side(c.side);
    auto grid = make_grid(c.tmin, c.tmax, c.step);
    FamilyScan scan;
    if (side == ScanSide::Sphere) {
        scan = family_scan(rho, grid, side);
    } else {
        FamilyEngine engine(rho);
        scan = family_scan(engine, grid, side, transport_options(c));
    }
    std::ostringstream os;
    scan.write_csv(os);
    emit(c, os.str());
    return 0;
}

json signature_json(const ComponentLabel& l) { return json::array({l.signature[0], l.signature[1], l.signature[2]}); }

int cmd_find_tn(const RunConfig& c) {
    const double rho = parse_fraction(c.rho);
    ScanSide side = parse_side(c.side);
    auto grid = make_grid(c.tmin, c.tmax, c.step);
    json out = provenance(c, "find-tn");
    json list = json::array();
    if (side == ScanSide::Sphere) {
        auto scan = family_scan(rho, grid, side);
        auto tn = find_tn_sphere(scan, c.tmin, c.tmax, 1e-9, transport_options(c));
        for (const auto& x : tn) {
            std::string cls = x.sphere_class == SphereRealClass::Noncompact ? "Noncompact"
                              : x.sphere_class == SphereRealClass::Compact  ? "Compact"
                                                                            : "NonReal";
            list.push_back({{"t", x.t}, {"sphere", {cj(x.sphere.x), cj(x.sphere.y), cj(x.sphere.z)}},
                            {"sphere_class", cls}});
        }
        out["spacing"] = crossing_spacing(tn);
    } else {
        FamilyEngine engine(rho);
        auto scan = family_scan(engine, grid, ScanSide::Torus);
        auto tn = find_tn(scan, engine, c.tmin, c.tmax);
        ComponentLabel target;
        bool have_target = c.k >= 3;
        if (have_target) target = goldman_classify(ffuchs_target(c.k).first, 1e-9);
        for (const auto& x : tn) {
            json row{{"t", x.t},
                     {"x", cj(x.row.x)},
                     {"y", cj(x.row.y)},
                     {"z1", cj(x.row.z1)},
                     {"z2", cj(x.row.z2)},
                     {"digits", x.row.digits},
                     {"reality", to_string(x.reality)},
                     {"label", x.label.name()},
                     {"signature", signature_json(x.label)}};
            if (have_target) row["matches_target"] = x.label == target;
            list.push_back(row);
        }
        out["spacing"] = crossing_spacing(tn);
        if (have_target) out["target_signature"] = signature_json(target);
    }
    out["crossings"] = list;
    emit(c, out.dump(2) + "\n");
    return 0;
}

int cmd_triangle_report(const RunConfig& c) {
    json out = provenance(c, "triangle-report");
    json rows = json::array();
    if (c.k_given && c.k < 3) throw ConfigError("triangle-report needs --k >= 3");
    // one triangle when --k is given, otherwise the table for k = 3..8
    int lo = c.k_given ? c.k : 3, hi = c.k_given ? c.k : 8;
    for (int k = lo; k <= hi; ++k) {
        auto d = triangle_data(k);
        auto ord = [](const Mat2C& m) { auto o = order_in_psl2(m); return o ? json(*o) : json(nullptr); };
        rows.push_back({{"k", k},
                        {"p0", cj(d.p0.value)},
                        {"p1", cj(d.p1.value)},
                        {"pinf", cj(d.pinf.value)},
                        {"pinf_expected", cj(expected_pinf(k))},
                        {"d0", cj(d.d0)},
                        {"d1", cj(d.d1)},
                        {"d1_expected", cj(expected_rotation_x1(k))},
                        {"dinf", cj(d.dinf)},
                        {"relation_residual", distance_to_pm_identity(d.Xinf * d.X1 * d.X0).residual},
                        {"orders", {ord(d.X0), ord(d.X1), ord(d.Xinf)}}});
    }
    out["triangles"] = rows;
    emit(c, out.dump(2) + "\n");
    return 0;
}

int cmd_covers_report(const RunConfig& c) {
    json out = provenance(c, "covers-report");
    auto cov = covering_monodromy(c.k);
    auto gens = kernel_generators(cov);
    out["deck"] = cov.deck;
    json g = json::array();
    for (const Word& w : gens) g.push_back(w.to_string());
    out["kernel_generators"] = g;
    if (c.k <= 4) {
        CosetGraph graph(gens);
        out["coset_index"] = graph.index() ? json(*graph.index()) : json(nullptr);
    }
    if (c.k % 2 == 0) {
        out["note"] = "even k: pullback and Euler number are not evaluated";
        emit(c, out.dump(2) + "\n");
        return 0;
    }
    const double rho_t = (c.k - 1.0) / (2.0 * c.k);
    auto opt = transport_options(c);
    auto pd = pullback_rep(four_pole_monodromy(build_D(rho_t), opt), cov);
    double worst = 0.0;
    for (const auto& [n, m] : pd.images) worst = std::max(worst, dist(m, Mat2C::identity()));
    out["D_kernel_max_distance_to_I"] = worst;
    auto pn = pullback_rep(four_pole_monodromy(build_nabla_tilde(rho_t), opt), cov);
    json punct = json::array();
    for (const auto& ch : pn.checks) punct.push_back({{"name", ch.name}, {"sign", ch.sign}, {"residual", ch.residual}});
    out["puncture_words"] = punct;
    auto pres = c.k == 3 ? stored_genus2_presentation() : tietze_reduce(cov);
    out["presentation"] = {{"kept", pres.kept}, {"relator", pres.relator.to_string("s")}};
    auto cs = closed_surface_rep(pn, pres);
    auto e = euler_number(cs.images, cs.relator);
    out["euler"] = {{"value", e.value}, {"raw", e.raw}, {"residual", e.residual}, {"genus", c.k - 1}};
    emit(c, out.dump(2) + "\n");
    return 0;
}

int cmd_wkb_appendix(const RunConfig& c) {
    json out = provenance(c, "wkb-appendix");
    auto opt = transport_options(c);
    const cplx alpha(-1.0, 0.5);
    const Mat2C B{0.2, 0.3, 0.25, -0.2};
    PathFamilyData data;
    data.alpha = [=](double) { return alpha; };
    data.B = [=](double) { return B; };
    data.t_grid = {20, 25, 30, 40, 50, 60, 80, 100, 120, 150, 200};
    auto rep = scaled_limit_check(data, opt);
    out["scaled_limit"] = rep.to_json();
    double closed = 0.0;
    for (const auto& r : rep.rows) closed = std::max(closed, max_abs(r.scaled - scaled_transport_closed_form(alpha, B, r.t)));
    out["closed_form_max_error"] = closed;
    DecayProblem p;
    p.alpha = [](double s) { return cplx(1.0 + 0.5 * s); };
    p.beta = [](double s) { return cplx(0.0, s); };
    p.g = [](double s) { return cplx(std::cos(3.0 * s), 0.2); };
    p.f_start = 0.3;
    out["decay"] = decay_check(p, {25, 50, 100, 200, 400}).to_json();
    emit(c, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monodromy computations for flat SL(2,C) connections on punctured spheres and tori.\n"
                 "Scan CSV columns: " +
                 [] {
                     std::string s;
                     for (const auto& c : FamilyScan::csv_columns()) s += (s.empty() ? "" : ",") + c;
                     return s;
                 }()};
    app.require_subcommand(1);
    app.set_version_flag("--version", MLAB_VERSION);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--k", cfg.k, "cover degree");
        sub->add_option("--tol", cfg.tol, "transport tolerance");
        sub->add_option("--rmin", cfg.rmin, "minimum distance of paths from singular points");
        sub->add_option("--seed", cfg.seed, "seed for sampled checks");
        sub->add_option("-o,--output", cfg.output, "output path (default stdout)");
    };
    auto add_family = [&](CLI::App* sub) {
        sub->add_option("--rho", cfg.rho, "boundary parameter, p/q or decimal");
        sub->add_option("--tmin", cfg.tmin, "first t");
        sub->add_option("--tmax", cfg.tmax, "last t");
        sub->add_option("--step", cfg.step, "t step");
        sub->add_option("--side", cfg.side, "torus, sphere or both");
    };

    std::function<int(const RunConfig&)> run;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite; JSON report to --output if given");
    add_common(verify);
    verify->callback([&] { run = cmd_verify; });
    auto* scan = app.add_subcommand("scan", "CSV scan of the t-family");
    add_common(scan);
    add_family(scan);
    scan->callback([&] { run = cmd_scan; });
    auto* tn = app.add_subcommand("find-tn", "real crossings t_n of the t-family, as JSON");
    add_common(tn);
    add_family(tn);
    tn->callback([&] {
        if (tn->count("--tmin") == 0) cfg.tmin = 10.0;
        if (tn->count("--step") == 0) cfg.step = 0.5;
        run = cmd_find_tn;
    });
    auto* tri = app.add_subcommand("triangle-report", "fixed points, rotations and orders of the triangle groups");
    add_common(tri);
    tri->callback([&] {
        cfg.k_given = tri->count("--k") > 0;
        run = cmd_triangle_report;
    });
    auto* cov = app.add_subcommand("covers-report", "pullback to the k-fold cover and its Euler number");
    add_common(cov);
    cov->callback([&] { run = cmd_covers_report; });
    auto* wkb = app.add_subcommand("wkb-appendix", "scaled-limit and decay checks on synthetic families");
    add_common(wkb);
    wkb->callback([&] { run = cmd_wkb_appendix; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }
    try {
        return run(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
