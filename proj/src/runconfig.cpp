#include "fanoguide/runconfig.hpp"

#include "fanoguide/errors.hpp"
#include "fanoguide/fano.hpp"
#include "fanoguide/graph1d.hpp"
#include "fanoguide/mesh.hpp"
#include "fanoguide/scattering.hpp"
#include "fanoguide/sweep.hpp"
#include "fanoguide/trapped.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fanoguide::cli {

namespace {

using nlohmann::json;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

double need_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing");
    if (!j[key].is_number()) fail(path + "." + key, "must be a number");
    return j[key].get<double>();
}

double opt_number(const json& j, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing");
    if (!j[key].is_string()) fail(path + "." + key, "must be a string");
    return j[key].get<std::string>();
}

geo::ProfileH parse_profile(const json& j) {
    geo::ProfileH p;
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") p.kind = geo::ProfileH::Kind::zero;
    else if (kind == "constant") p.kind = geo::ProfileH::Kind::constant;
    else if (kind == "bump") p.kind = geo::ProfileH::Kind::bump;
    else if (kind == "rigid_vertical") p.kind = geo::ProfileH::Kind::rigid_vertical;
    else fail("geometry.profile.kind", "unknown kind '" + kind + "'");
    const std::string arc = j.value("arc", "top_wall");
    if (arc == "top_wall") p.arc = geo::ProfileH::Arc::top_wall;
    else if (arc == "branch_end") p.arc = geo::ProfileH::Arc::branch_end;
    else if (arc == "inclusion") p.arc = geo::ProfileH::Arc::inclusion_circle;
    else fail("geometry.profile.arc", "unknown arc '" + arc + "'");
    p.value = j.value("value", 1.0);
    p.s0 = j.value("s0", 0.0);
    p.s1 = j.value("s1", 0.0);
    return p;
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    cfg.task = need_string(j, "", "task");
    static const std::vector<std::string> tasks = {
        "graph1d-sweep", "mesh-gen", "scatter", "trapped",
        "fano-predict",  "sweep",    "find-zero"};
    if (std::find(tasks.begin(), tasks.end(), cfg.task) == tasks.end())
        fail("task", "unknown task '" + cfg.task + "'");

    if (cfg.task != "graph1d-sweep") {
        if (!j.contains("geometry")) fail("geometry", "missing");
        const json& g = j["geometry"];
        cfg.variant = need_string(g, "geometry", "variant");
        if (cfg.variant != "straight" && cfg.variant != "lshape" && cfg.variant != "disk")
            fail("geometry.variant", "must be straight | lshape | disk");
        cfg.abc = geo::abc_from_string(g.value("abc", "neumann"));
        cfg.k0 = opt_number(g, "k0", 0.8 * kPi);
        cfg.L = opt_number(g, "L", 0.0);
        cfg.r_trunc = opt_number(g, "r_trunc", 0.0);
        if (cfg.variant == "lshape" && !(cfg.L > 1.0))
            fail("geometry.L", "lshape needs a branch height L > 1");
        if (g.contains("profile")) cfg.profile = parse_profile(g["profile"]);
        else {
            // default perturbation profile of each family
            if (cfg.variant == "lshape") {
                cfg.profile.kind = geo::ProfileH::Kind::constant;
                cfg.profile.arc = geo::ProfileH::Arc::branch_end;
                cfg.profile.value = 1.0;
            } else if (cfg.variant == "disk") {
                cfg.profile.kind = geo::ProfileH::Kind::rigid_vertical;
                cfg.profile.arc = geo::ProfileH::Arc::inclusion_circle;
            }
        }
    }

    if (j.contains("epsilons")) {
        if (!j["epsilons"].is_array()) fail("epsilons", "must be an array");
        for (const auto& e : j["epsilons"]) cfg.epsilons.push_back(e.get<double>());
    }
    if (j.contains("k_window")) {
        if (!j["k_window"].is_array() || j["k_window"].size() != 2)
            fail("k_window", "must be [k_lo, k_hi]");
        cfg.k_lo = j["k_window"][0].get<double>();
        cfg.k_hi = j["k_window"][1].get<double>();
        if (!(cfg.k_lo < cfg.k_hi)) fail("k_window", "needs k_lo < k_hi");
    }
    if (j.contains("param_window")) {
        if (!j["param_window"].is_array() || j["param_window"].size() != 2)
            fail("param_window", "must be [lo, hi]");
        cfg.param_lo = j["param_window"][0].get<double>();
        cfg.param_hi = j["param_window"][1].get<double>();
    }
    cfg.trapped_param = j.value("param", "");
    cfg.n = static_cast<int>(opt_number(j, "n", 41));
    if (cfg.n < 2) fail("n", "needs at least 2 samples");
    if (j.contains("mesh")) {
        cfg.h = opt_number(j["mesh"], "h", 0.025);
        cfg.n_terms = static_cast<int>(opt_number(j["mesh"], "n_terms", 20));
    }
    if (!(cfg.h > 0.0)) fail("mesh.h", "must be positive");
    if (cfg.n_terms < 2) fail("mesh.n_terms", "needs at least 2 modal terms");
    cfg.target = j.value("target", "R");
    if (cfg.target != "R" && cfg.target != "T") fail("target", "must be R or T");
    cfg.full_cross_check = j.value("full", false);
    cfg.output_dir = j.value("output_dir", ".");
    cfg.seed = j.value("seed", 1UL);

    json canonical = j;
    cfg.raw_json = canonical.dump();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_hash(const RunConfig& cfg) {
    unsigned long long h = 1469598103934665603ULL;
    for (const char c : cfg.raw_json) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

namespace {

geo::WaveguideGeometry base_geometry(const RunConfig& cfg) {
    if (cfg.variant == "lshape")
        return geo::make_lshape(cfg.abc, kPi / cfg.k0, cfg.L, cfg.r_trunc);
    if (cfg.variant == "disk") return geo::make_disk(cfg.abc, 0.0, cfg.r_trunc);
    return geo::make_straight(cfg.abc, cfg.r_trunc > 0.0 ? cfg.r_trunc : 3.0);
}

sweep::PerturbationFamily family_of(const RunConfig& cfg) {
    sweep::PerturbationFamily fam;
    fam.base = base_geometry(cfg);
    fam.profile = cfg.profile;
    fam.k0 = cfg.k0;
    return fam;
}

std::string meta_line(const RunConfig& cfg, const geo::Mesh* mesh) {
    std::ostringstream os;
    os << "fanoguide " << cfg.task << " config=" << config_hash(cfg);
    if (mesh)
        os << " mesh_nodes=" << mesh->node_count() << " mesh_tris=" << mesh->tris.size()
           << " h=" << mesh->h;
    return os.str();
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = std::filesystem::path(cfg.output_dir) / name;
    std::ofstream out(path);
    if (!out) throw ConfigError("config: cannot open '" + path.string() + "'");
    out.precision(17);
    return out;
}

void run_graph1d_sweep(const RunConfig& cfg, std::ostream& log) {
    const double eps = cfg.epsilons.empty() ? 0.0 : cfg.epsilons.front();
    auto out = open_out(cfg, "graph1d_sweep.csv");
    out << "# " << meta_line(cfg, nullptr) << " eps=" << eps << "\n";
    out << "k,re_R,im_R,theta_rad\n";
    for (int i = 0; i < cfg.n; ++i) {
        const double k = cfg.k_lo + (cfg.k_hi - cfg.k_lo) * i / (cfg.n - 1);
        const auto R = graph1d::reflection_closed_form(eps, k);
        out << k << "," << R.real() << "," << R.imag() << ","
            << scattering::principal_phase(std::arg(R)) << "\n";
    }
    log << "wrote graph1d_sweep.csv (" << cfg.n << " rows)\n";
}

void run_mesh_gen(const RunConfig& cfg, std::ostream& log) {
    const double eps = cfg.epsilons.empty() ? 0.0 : cfg.epsilons.front();
    const auto g = family_of(cfg).at(eps);
    const geo::Mesh mesh = geo::generate_mesh(g, cfg.h);
    auto out = open_out(cfg, "mesh.txt");
    geo::export_mesh(mesh, out);
    log << "wrote mesh.txt (" << mesh.node_count() << " nodes, " << mesh.tris.size()
        << " triangles)\n";
}

void run_scatter(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.k_lo > 0.0)) fail("k_window", "scatter uses k_window[0] as the wavenumber");
    const double eps = cfg.epsilons.empty() ? 0.0 : cfg.epsilons.front();
    const double k = cfg.k_lo;
    const double lambda = k * k;
    const auto fam = family_of(cfg);
    const auto g = fam.at(eps);
    sweep::HalfGuideSolver solver(g, cfg.h, cfg.n_terms);
    const auto rn = solver.reflection(lambda, geo::AbcKind::neumann);
    const auto rd = solver.reflection(lambda, geo::AbcKind::dirichlet);
    const auto rt = scattering::compose_full(rn, rd, lambda, eps);

    json out_j;
    out_j["meta"] = {{"config", config_hash(cfg)},
                     {"mesh_nodes", solver.mesh().node_count()},
                     {"h", cfg.h}};
    out_j["lambda"] = lambda;
    out_j["k"] = k;
    out_j["RN"] = {rn.real(), rn.imag()};
    out_j["RD"] = {rd.real(), rd.imag()};
    out_j["R"] = {rt.R.real(), rt.R.imag()};
    out_j["T"] = {rt.T.real(), rt.T.imag()};
    out_j["energy_defect"] = rt.energy_defect();
    if (cfg.full_cross_check) {
        const geo::Mesh full = geo::mirror_union(solver.mesh());
        fem::HelmholtzOperator op(full, geo::AbcKind::none);
        const auto direct = scattering::full_guide_solve(op, lambda, eps, cfg.n_terms);
        out_j["R_direct"] = {direct.R.real(), direct.R.imag()};
        out_j["T_direct"] = {direct.T.real(), direct.T.imag()};
        out_j["composition_gap"] =
            std::max(std::abs(direct.R - rt.R), std::abs(direct.T - rt.T));

        // Field exports on the mirrored mesh: total and scattered waves.
        fem::RadiationCondition rc{fem::RadiationCondition::Kind::standard, cfg.n_terms};
        auto sys = op.factorize(lambda, rc);
        const fem::DiscreteField total = sys->solve_incident(0);
        fem::DiscreteField scattered = total;
        const auto modes = modal::build_mode_set(lambda);
        const cd ii(0.0, 1.0);
        for (int i = 0; i < full.node_count(); ++i)
            scattered.values[i] -= std::exp(-ii * modes.alpha[0] * full.nodes[i].x()) /
                                   std::sqrt(modes.a[0]);
        const auto dir = std::filesystem::path(cfg.output_dir);
        std::filesystem::create_directories(dir);
        fem::export_field_csv(full, total, (dir / "field_total.csv").string(),
                              meta_line(cfg, &full));
        fem::export_field_csv(full, scattered, (dir / "field_scattered.csv").string(),
                              meta_line(cfg, &full));
    }
    auto out = open_out(cfg, "scatter.json");
    out << out_j.dump(2) << "\n";
    log << "wrote scatter.json\n";
}

trapped::ParamFamily trapped_family(const RunConfig& cfg) {
    const double eps = cfg.epsilons.empty() ? 0.0 : cfg.epsilons.front();
    if (cfg.trapped_param == "L" && cfg.variant == "lshape")
        return trapped::lshape_height_family(cfg.k0, cfg.abc);
    if (cfg.trapped_param == "k" && cfg.variant == "disk")
        return trapped::disk_wavenumber_family(eps, cfg.abc);
    fail("param", "trapped search supports L (lshape) or k (disk)");
}

void run_trapped(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.param_lo < cfg.param_hi)) fail("param_window", "missing or empty");
    trapped::LocateOptions opts;
    opts.h = cfg.h;
    opts.n_terms = cfg.n_terms;
    const auto rec = trapped::locate_trapped(trapped_family(cfg), cfg.param_lo,
                                             cfg.param_hi, opts);
    json out_j;
    out_j["meta"] = {{"config", config_hash(cfg)},
                     {"mesh_nodes", rec.mesh->node_count()},
                     {"h", cfg.h}};
    out_j["param"] = cfg.trapped_param;
    out_j["param_value"] = rec.param;
    out_j["lambda0"] = rec.lambda0;
    out_j["k0"] = std::sqrt(rec.lambda0);
    out_j["K"] = rec.K;
    out_j["residual_smm_plus_1"] = rec.residual;
    out_j["slow_decay_ok"] = rec.slow_decay_ok;
    auto out = open_out(cfg, "trapped.json");
    out << out_j.dump(2) << "\n";
    const auto field_path =
        (std::filesystem::path(cfg.output_dir) / "trapped_field.csv").string();
    fem::export_field_csv(*rec.mesh, rec.field, field_path, meta_line(cfg, rec.mesh.get()));
    log << "wrote trapped.json and trapped_field.csv (param " << rec.param << ")\n";
}

void run_fano_predict(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.param_lo < cfg.param_hi)) fail("param_window", "missing or empty");
    trapped::LocateOptions opts;
    opts.h = cfg.h;
    opts.n_terms = cfg.n_terms;
    const auto rec = trapped::locate_trapped(trapped_family(cfg), cfg.param_lo,
                                             cfg.param_hi, opts);
    fem::HelmholtzOperator op(*rec.mesh, rec.geometry.abc);
    const auto basis = fano::compute_zeta_basis(op, rec, cfg.n_terms);
    const auto arc = fano::make_profile_arc(*rec.mesh, rec.geometry, cfg.profile);
    const double ell_m = fano::compute_ell_m(rec, arc, cfg.profile);
    const auto vr = fano::compute_t_and_ell_row(op, rec, basis, arc, cfg.profile,
                                                cfg.n_terms);
    const auto coeffs = fano::assemble_coefficients(rec, ell_m, vr, basis.s0);

    json out_j;
    out_j["meta"] = {{"config", config_hash(cfg)},
                     {"mesh_nodes", rec.mesh->node_count()},
                     {"h", cfg.h}};
    out_j["lambda0"] = coeffs.lambda0;
    out_j["alpha_m"] = coeffs.alpha_m;
    out_j["K"] = coeffs.K;
    out_j["ell_m"] = coeffs.ell_m;
    out_j["re_spp_mm"] = coeffs.re_spp_mm;
    out_j["assumption_ok"] = coeffs.assumption_ok;
    out_j["assumption_margin"] = coeffs.assumption_margin;
    for (int j2 = 0; j2 < coeffs.t.size(); ++j2) {
        out_j["t"].push_back({coeffs.t[j2].real(), coeffs.t[j2].imag()});
        out_j["ell_row"].push_back({coeffs.ell_row[j2].real(), coeffs.ell_row[j2].imag()});
    }
    for (double eps : cfg.epsilons)
        out_j["predicted_centers"].push_back(
            {{"eps", eps}, {"lambda", coeffs.lambda0 + eps * coeffs.ell_m}});
    if (!coeffs.assumption_ok)
        out_j["warning"] = "profile drives a fast resonance (ell_row = ell_m t)";
    auto out = open_out(cfg, "fano_predict.json");
    out << out_j.dump(2) << "\n";
    log << "wrote fano_predict.json (ell_m " << ell_m << ")\n";
}

void run_sweep(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.k_lo < cfg.k_hi)) fail("k_window", "missing or empty");
    const auto fam = family_of(cfg);
    const std::vector<double> eps_list =
        cfg.epsilons.empty() ? std::vector<double>{0.0} : cfg.epsilons;
    sweep::SweepOptions opts;
    opts.h = cfg.h;
    opts.n_terms = cfg.n_terms;

    auto out = open_out(cfg, "sweep.csv");
    out << "# " << meta_line(cfg, nullptr) << "\n";
    out << "eps,k,lambda,theta_n_rad,theta_d_rad,re_R,im_R,re_T,im_T,energy_defect,"
           "flagged\n";
    for (double eps : eps_list) {
        const auto table = sweep::frequency_sweep(fam, eps, cfg.k_lo, cfg.k_hi, cfg.n,
                                                  opts);
        for (const auto& row : table.rows) {
            if (!row.ok) continue;
            out << row.epsilon << "," << row.k << "," << row.lambda << "," << row.theta_n
                << "," << row.theta_d << "," << row.R.real() << "," << row.R.imag()
                << "," << row.T.real() << "," << row.T.imag() << ","
                << row.energy_defect << "," << (row.flagged ? 1 : 0) << "\n";
        }
        log << "sweep eps=" << eps << " done\n";
    }
    log << "wrote sweep.csv\n";
}

void run_find_zero(const RunConfig& cfg, std::ostream& log) {
    if (!(cfg.k_lo < cfg.k_hi)) fail("k_window", "missing or empty");
    const double eps = cfg.epsilons.empty() ? 0.05 : cfg.epsilons.front();
    const auto fam = family_of(cfg);
    sweep::SweepOptions opts;
    opts.h = cfg.h;
    opts.n_terms = cfg.n_terms;
    const auto res = (cfg.target == "R")
                         ? sweep::find_nonreflection(fam, eps, cfg.k_lo, cfg.k_hi, opts)
                         : sweep::find_perfect_reflection(fam, eps, cfg.k_lo, cfg.k_hi,
                                                          opts);
    json out_j;
    out_j["meta"] = {{"config", config_hash(cfg)}, {"h", cfg.h}};
    out_j["target"] = cfg.target;
    out_j["eps"] = eps;
    out_j["k_star"] = res.k_star;
    out_j["lambda_star"] = res.k_star * res.k_star;
    out_j["residual"] = res.residual;
    out_j["solver_evaluations"] = res.evaluations;
    auto out = open_out(cfg, "find_zero.json");
    out << out_j.dump(2) << "\n";
    log << "wrote find_zero.json (k* = " << res.k_star << ")\n";
}

} // namespace

void run(const RunConfig& cfg, std::ostream& log) {
    if (cfg.task == "graph1d-sweep") return run_graph1d_sweep(cfg, log);
    if (cfg.task == "mesh-gen") return run_mesh_gen(cfg, log);
    if (cfg.task == "scatter") return run_scatter(cfg, log);
    if (cfg.task == "trapped") return run_trapped(cfg, log);
    if (cfg.task == "fano-predict") return run_fano_predict(cfg, log);
    if (cfg.task == "sweep") return run_sweep(cfg, log);
    if (cfg.task == "find-zero") return run_find_zero(cfg, log);
    throw ConfigError("config: task dispatch failed for '" + cfg.task + "'");
}

const std::map<std::string, std::string>& reproduce_presets() {
    static const std::map<std::string, std::string> presets = {
        {"fig2", R"({"task":"graph1d-sweep","epsilons":[0.1],"k_window":[0.05,3.1],"n":1200,
                    "output_dir":"out_fig2"})"},
        {"fig3", R"({"task":"graph1d-sweep","epsilons":[0.05],"k_window":[0.05,3.1],"n":1200,
                    "output_dir":"out_fig3"})"},
        {"fig6", R"({"task":"sweep","geometry":{"variant":"lshape","k0":2.5132741228718345,
                    "L":2.5524},"epsilons":[0.0,0.01,0.025,0.05],"k_window":[2.2,2.75],
                    "n":61,"mesh":{"h":0.03},"output_dir":"out_fig6"})"},
        {"fig8", R"({"task":"scatter","geometry":{"variant":"lshape","k0":2.5132741228718345,
                    "L":2.5524},"epsilons":[0.05],"k_window":[2.46402,2.5],"full":true,
                    "mesh":{"h":0.02},"output_dir":"out_fig8"})"},
        {"fig9", R"({"task":"scatter","geometry":{"variant":"lshape","k0":2.5132741228718345,
                    "L":2.5524},"epsilons":[0.05],"k_window":[2.4666602,2.5],"full":true,
                    "mesh":{"h":0.02},"output_dir":"out_fig9"})"},
        {"fig10", R"({"task":"sweep","geometry":{"variant":"disk"},"epsilons":[0.0,0.02,0.05],
                    "k_window":[2.55,2.9],"n":61,"mesh":{"h":0.025},"output_dir":"out_fig10"})"},
        {"fig11", R"({"task":"scatter","geometry":{"variant":"disk"},"epsilons":[0.05],
                    "k_window":[2.751,2.8],"full":true,"mesh":{"h":0.02},
                    "output_dir":"out_fig11"})"},
        {"fig12", R"({"task":"scatter","geometry":{"variant":"disk"},"epsilons":[0.05],
                    "k_window":[2.75495,2.8],"full":true,"mesh":{"h":0.02},
                    "output_dir":"out_fig12"})"},
    };
    return presets;
}

} // namespace fanoguide::cli
