// qcf: command-line front end for the curvature-functional toolkit.
//
// Subcommands: catalog, curvature, identities, functional, critical-check,
// region-scan, pinch-check, flow. Records are JSON-lines (CSV for scans);
// every record carries the run-configuration hash and the tolerance it was
// judged against. Exit codes: 0 pass/feasible, 1 checked-and-failed,
// 2 usage or numerical error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcf/curvature.hpp"
#include "qcf/flow.hpp"
#include "qcf/functional.hpp"
#include "qcf/identities.hpp"
#include "qcf/regions.hpp"

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const json& cfg) {
    std::ostringstream os;
    os << std::hex << fnv1a(cfg.dump());
    return os.str();
}

struct Output {
    std::ofstream file;
    bool to_file = false;

    void open(std::string path) {
        if (path.empty()) return;
        if (path[0] != '/') {
            if (const char* dir = std::getenv("QCF_OUTPUT_DIR"))
                path = std::string(dir) + "/" + path;
        }
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output path: " + path);
        to_file = true;
    }
    void line(const std::string& s) {
        if (to_file)
            file << s << "\n";
        else
            std::cout << s << "\n";
    }
    void raw(const std::string& s) {
        if (to_file)
            file << s;
        else
            std::cout << s;
    }
};

struct MetricFlags {
    std::string id = "round_sphere";
    qcf::CatalogParams params;
    int refine = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--metric", id, "catalog metric id");
        cmd->add_option("--n", params.n, "dimension");
        cmd->add_option("--p", params.p, "first factor dimension (product_spheres)");
        cmd->add_option("--q", params.q, "second factor dimension (product_spheres)");
        cmd->add_option("--L", params.L, "circle radius");
        cmd->add_option("--r", params.r, "sphere radius");
        cmd->add_option("--a", params.a, "first sphere radius");
        cmd->add_option("--b", params.b, "second sphere radius");
        cmd->add_option("--side", params.side, "torus side length");
        cmd->add_option("--base", params.base, "base metric id for `conformal`");
        cmd->add_option("--res-periodic", params.res_periodic, "nodes per periodic coordinate");
        cmd->add_option("--res-polar", params.res_polar, "nodes per polar coordinate");
        cmd->add_option("--refine", refine, "grid refinement factor");
    }
    qcf::ChartMetric build() const {
        qcf::ChartMetric m = qcf::build_metric(id, params);
        if (refine > 1) m = m.refined(refine);
        return m;
    }
    json to_json() const {
        return {{"metric", id},       {"n", params.n},       {"p", params.p},
                {"q", params.q},      {"L", params.L},       {"r", params.r},
                {"a", params.a},      {"b", params.b},       {"side", params.side},
                {"base", params.base},{"res_periodic", params.res_periodic},
                {"res_polar", params.res_polar}, {"refine", refine}};
    }
};

int run(int argc, char** argv) {
    CLI::App app{"quadratic curvature functional toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string out_path;
    app.add_option("--out", out_path, "output file (default: stdout)")->configurable(true);

    // catalog
    auto* c_catalog = app.add_subcommand("catalog", "list catalog metric ids");

    // curvature
    auto* c_curv = app.add_subcommand("curvature", "per-node curvature report");
    MetricFlags mf_curv;
    mf_curv.attach(c_curv);
    double curv_tol = 1e-6;
    bool curv_deriv = false;
    c_curv->add_option("--tol", curv_tol, "report tolerance");
    c_curv->add_flag("--derivatives", curv_deriv, "include covariant-derivative norms");

    // identities
    auto* c_id = app.add_subcommand("identities", "algebraic identity/inequality suite");
    bool id_synth = false;
    int id_n = 4;
    long id_samples = 200;
    std::uint64_t id_seed = 1;
    double id_tol = 1e-10;
    c_id->add_flag("--synthetic", id_synth, "use synthetic random frames");
    c_id->add_option("--n", id_n, "dimension");
    c_id->add_option("--samples", id_samples, "sample count");
    c_id->add_option("--seed", id_seed, "base RNG seed");
    c_id->add_option("--tol", id_tol, "relative tolerance");

    // functional
    auto* c_fun = app.add_subcommand("functional", "evaluate the functional");
    MetricFlags mf_fun;
    mf_fun.attach(c_fun);
    double fun_t = 0.0, fun_s = 0.0, fun_scaling_c = 0.0, fun_tol = 1e-8;
    c_fun->add_option("--t", fun_t, "t coefficient");
    c_fun->add_option("--s", fun_s, "s coefficient");
    c_fun->add_option("--scaling-c", fun_scaling_c, "also check the scaling law at this c");
    c_fun->add_option("--tol", fun_tol, "tolerance for the scaling check");

    // critical-check
    auto* c_crit = app.add_subcommand("critical-check", "Euler-Lagrange residuals");
    MetricFlags mf_crit;
    mf_crit.attach(c_crit);
    double crit_t = 0.0, crit_s = 0.0, crit_tol = 1e-5;
    c_crit->add_option("--t", crit_t, "t coefficient");
    c_crit->add_option("--s", crit_s, "s coefficient");
    c_crit->add_option("--tol", crit_tol, "normalized residual tolerance");

    // region-scan
    auto* c_scan = app.add_subcommand("region-scan", "scan a (t,s) inequality system");
    std::string scan_system = "thm13_n3";
    int scan_n = 5, scan_res = 201;
    std::vector<double> scan_t{-1.0, 1.0}, scan_s{-1.0, 2.0};
    c_scan->add_option("--system", scan_system, "region system id");
    c_scan->add_option("--n", scan_n, "dimension for n5plus systems");
    c_scan->add_option("--t", scan_t, "t range lo hi")->expected(2);
    c_scan->add_option("--s", scan_s, "s range lo hi")->expected(2);
    c_scan->add_option("--res", scan_res, "nodes per axis");

    // pinch-check
    auto* c_pinch = app.add_subcommand("pinch-check", "pointwise pinching margin");
    MetricFlags mf_pinch;
    mf_pinch.attach(c_pinch);
    double pinch_t = 0.0, pinch_s = 0.0, pinch_tol = 0.0;
    c_pinch->add_option("--t", pinch_t, "t coefficient");
    c_pinch->add_option("--s", pinch_s, "s coefficient");
    c_pinch->add_option("--tol", pinch_tol, "margin threshold");

    // flow
    auto* c_flow = app.add_subcommand("flow", "gradient descent over an ansatz family");
    std::string flow_family = "warped_circle_sphere";
    int flow_n = 3, flow_modes = 4, flow_steps = 2000;
    double flow_t = 0.0, flow_s = 0.0, flow_lr = 1e-2, flow_tol = 1e-5, flow_L = 1.0,
           flow_r = 1.0, flow_side = 1.0;
    std::uint64_t flow_seed = 1;
    std::vector<double> flow_theta0;
    c_flow->add_option("--family", flow_family, "ansatz family id");
    c_flow->add_option("--n", flow_n, "dimension");
    c_flow->add_option("--t", flow_t, "t coefficient");
    c_flow->add_option("--s", flow_s, "s coefficient");
    c_flow->add_option("--modes", flow_modes, "Fourier mode count K");
    c_flow->add_option("--steps", flow_steps, "max descent steps");
    c_flow->add_option("--lr", flow_lr, "learning rate");
    c_flow->add_option("--tol", flow_tol, "gradient-norm stopping tolerance");
    c_flow->add_option("--seed", flow_seed, "seed (recorded for reproducibility)");
    c_flow->add_option("--L", flow_L, "circle radius of the base product");
    c_flow->add_option("--r", flow_r, "sphere radius of the base product");
    c_flow->add_option("--side", flow_side, "torus side of the base");
    c_flow->add_option("--theta0", flow_theta0, "initial parameter vector");

    CLI11_PARSE(app, argc, argv);

    Output out;
    out.open(out_path);

    if (*c_catalog) {
        json cfg{{"cmd", "catalog"}};
        const std::string h = config_hash(cfg);
        for (const auto& id : qcf::catalog_ids())
            out.line(json{{"id", id}, {"config_hash", h}, {"tolerance", 0.0}}.dump());
        return 0;
    }

    if (*c_curv) {
        json cfg = mf_curv.to_json();
        cfg["cmd"] = "curvature";
        cfg["tol"] = curv_tol;
        cfg["derivatives"] = curv_deriv;
        const std::string h = config_hash(cfg);
        qcf::ChartMetric m = mf_curv.build();
        qcf::FrameOptions opt;
        opt.derivatives = curv_deriv;
        const auto frames = qcf::frame_field(m, qcf::Exec::parallel, opt);
        for (std::size_t k = 0; k < frames.size(); ++k) {
            const auto& f = frames[k];
            json rec{{"node", k},
                     {"R", f.R},
                     {"normRm2", f.normRm2},
                     {"normE2", f.normE2},
                     {"normW2", f.normW2},
                     {"normC2", curv_deriv ? f.normC2 : 0.0},
                     {"config_hash", h},
                     {"tolerance", curv_tol}};
            std::vector<double> x(f.x.begin(), f.x.begin() + f.dim);
            rec["x"] = x;
            out.line(rec.dump());
        }
        return 0;
    }

    if (*c_id) {
        if (id_samples <= 0) {
            std::cerr << "identities: --samples must be positive\n";
            return 2;
        }
        json cfg{{"cmd", "identities"}, {"synthetic", id_synth}, {"n", id_n},
                 {"samples", id_samples}, {"seed", id_seed}, {"tol", id_tol}};
        const std::string h = config_hash(cfg);
        qcf::IdentityVerdict dec_c{"contraction"}, dec_r{"ricci_square"}, dec_n{"norm_split"},
            oku{"okumura"}, hui{"huisken"};
        dec_c.tolerance = dec_r.tolerance = dec_n.tolerance = id_tol;
        oku.tolerance = hui.tolerance = 1e-12;
        for (long i = 0; i < id_samples; ++i) {
            const std::uint64_t seed = id_seed + static_cast<std::uint64_t>(i);
            auto g = qcf::MetricAtPoint::identity(id_n);
            auto E = qcf::random_tracefree_symmetric(id_n, seed);
            auto W = qcf::random_weyl_like(id_n, seed + 0x9e3779b97f4a7c15ull);
            const double R = 1.0 + (seed % 7);
            auto d = qcf::check_decomposition_identities(W, E, R, g);
            dec_c.record(d.contraction, seed);
            dec_r.record(d.ricci_square, seed);
            dec_n.record(d.norm_split, seed);
            auto ok = qcf::check_okumura(E, g);
            oku.record(std::max(-ok.lower, -ok.upper), seed);
            hui.record(-qcf::check_huisken(W, E, g), seed);
        }
        bool all = true;
        for (const auto* v : {&dec_c, &dec_r, &dec_n, &oku, &hui}) {
            all = all && v->pass;
            out.line(json{{"id", v->id},
                          {"max_residual", v->max_residual},
                          {"samples", v->sample_count},
                          {"worst_seed", v->worst_seed},
                          {"pass", v->pass},
                          {"config_hash", h},
                          {"tolerance", v->tolerance}}
                         .dump());
        }
        return all ? 0 : 1;
    }

    if (*c_fun) {
        json cfg = mf_fun.to_json();
        cfg["cmd"] = "functional";
        cfg["t"] = fun_t;
        cfg["s"] = fun_s;
        const std::string h = config_hash(cfg);
        qcf::ChartMetric m = mf_fun.build();
        qcf::QuadParams p{mf_fun.params.n, fun_t, fun_s};
        p.n = m.dim;
        const auto fv = qcf::evaluate_functional(m, p);
        json rec{{"int_ric2", fv.int_ric2}, {"int_r2", fv.int_r2}, {"int_rm2", fv.int_rm2},
                 {"F", fv.F},               {"volume", fv.volume}, {"config_hash", h},
                 {"tolerance", fun_tol}};
        bool pass = true;
        if (fun_scaling_c > 0.0) {
            const double defect = qcf::scaling_check(m, p, fun_scaling_c);
            rec["scaling_defect"] = defect;
            pass = defect < fun_tol;
        }
        out.line(rec.dump());
        return pass ? 0 : 1;
    }

    if (*c_crit) {
        json cfg = mf_crit.to_json();
        cfg["cmd"] = "critical-check";
        cfg["t"] = crit_t;
        cfg["s"] = crit_s;
        cfg["tol"] = crit_tol;
        const std::string h = config_hash(cfg);
        qcf::ChartMetric m = mf_crit.build();
        const auto unit = qcf::rescale_to_unit_volume(m);
        qcf::QuadParams p{m.dim, crit_t, crit_s};
        const auto rep = qcf::el_residuals(unit.metric, p);
        const bool pass =
            rep.residual_traceless_rel < crit_tol && rep.residual_scalar_rel < crit_tol;
        out.line(json{{"residual_traceless", rep.residual_traceless},
                      {"residual_traceless_rel", rep.residual_traceless_rel},
                      {"residual_scalar", rep.residual_scalar},
                      {"residual_scalar_rel", rep.residual_scalar_rel},
                      {"bochner1", rep.bochner1},
                      {"bochner2", rep.bochner2},
                      {"form_disagreement", rep.form_disagreement},
                      {"defect_trace", rep.defect_trace},
                      {"lambda", rep.lambda},
                      {"volume", rep.volume},
                      {"pass", pass},
                      {"config_hash", h},
                      {"tolerance", crit_tol}}
                     .dump());
        return pass ? 0 : 1;
    }

    if (*c_scan) {
        json cfg{{"cmd", "region-scan"}, {"system", scan_system}, {"n", scan_n},
                 {"t", scan_t},          {"s", scan_s},           {"res", scan_res}};
        const auto sys = qcf::make_region_system(qcf::region_system_from_string(scan_system),
                                                 scan_n);
        const auto rep =
            qcf::scan(sys, scan_t[0], scan_t[1], scan_s[0], scan_s[1], scan_res, scan_res);
        out.raw("# config_hash=" + config_hash(cfg) + "\n");
        out.raw(rep.csv);
        return rep.feasible_count > 0 ? 0 : 1;
    }

    if (*c_pinch) {
        json cfg = mf_pinch.to_json();
        cfg["cmd"] = "pinch-check";
        cfg["t"] = pinch_t;
        cfg["s"] = pinch_s;
        const std::string h = config_hash(cfg);
        qcf::ChartMetric m = mf_pinch.build();
        qcf::QuadParams p{m.dim, pinch_t, pinch_s};
        const auto res = qcf::pinch_check(m, p);
        const bool pass = res.margin > pinch_tol;
        out.line(json{{"margin", res.margin},
                      {"worst_node", res.worst_node},
                      {"degenerate", res.degenerate},
                      {"pass", pass},
                      {"config_hash", h},
                      {"tolerance", pinch_tol}}
                     .dump());
        return pass ? 0 : 1;
    }

    if (*c_flow) {
        json cfg{{"cmd", "flow"},     {"family", flow_family}, {"n", flow_n},
                 {"t", flow_t},       {"s", flow_s},           {"modes", flow_modes},
                 {"steps", flow_steps},{"lr", flow_lr},        {"tol", flow_tol},
                 {"seed", flow_seed}, {"theta0", flow_theta0}};
        const std::string h = config_hash(cfg);
        qcf::CatalogParams base;
        base.L = flow_L;
        base.r = flow_r;
        base.side = flow_side;
        auto fam = qcf::make_family(qcf::family_from_string(flow_family), flow_n, flow_modes,
                                    base);
        std::vector<double> theta0 = flow_theta0;
        theta0.resize(fam.dim(), 0.0);
        qcf::QuadParams p{flow_n, flow_t, flow_s};
        qcf::FlowOptions opt;
        opt.max_steps = flow_steps;
        opt.lr = flow_lr;
        opt.tol = flow_tol;
        const auto trace = qcf::descend(fam, theta0, p, opt);
        for (const auto& st : trace.steps)
            out.line(json{{"iter", st.iter},
                          {"F", st.F},
                          {"grad_norm", st.grad_norm},
                          {"step_size", st.step_size},
                          {"theta", st.theta},
                          {"config_hash", h},
                          {"tolerance", flow_tol}}
                         .dump());
        json summary{{"summary", true},
                     {"converged", trace.converged},
                     {"incomplete", trace.incomplete},
                     {"grad_norm", trace.final_grad_norm},
                     {"config_hash", h},
                     {"tolerance", flow_tol}};
        if (trace.has_residuals) {
            summary["el_residual"] = trace.final_residuals.residual_traceless_rel;
            summary["el_residual_scalar"] = trace.final_residuals.residual_scalar_rel;
        }
        out.line(summary.dump());
        return trace.converged ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
