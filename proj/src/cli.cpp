#include "kslab/cli.hpp"

#include <filesystem>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "kslab/comb.hpp"
#include "kslab/errors.hpp"
#include "kslab/io.hpp"
#include "kslab/linalg.hpp"
#include "kslab/perturb.hpp"
#include "kslab/projections.hpp"
#include "kslab/spectra.hpp"

namespace kslab {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands{"wedge", "essential", "convergence", "comb", "szego", "perturb"};

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& dst) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    dst = j.at(key).get<T>();
}

}  // namespace

json RunConfig::to_json() const {
    return json{{"command", command},
                {"preset", preset},
                {"spec", spec},
                {"theta", opt(theta)},
                {"n", opt(n)},
                {"eps", opt(eps)},
                {"panels", opt(panels)},
                {"order", opt(order)},
                {"grading_levels", opt(grading_levels)},
                {"grading_ratio", opt(grading_ratio)},
                {"endpoint_levels", opt(endpoint_levels)},
                {"nodes", opt(nodes)},
                {"tol", tol},
                {"delta", delta},
                {"ladder", ladder},
                {"battery", battery},
                {"matrix_route", matrix_route},
                {"sweep", sweep},
                {"out", out},
                {"seed", seed}};
}

RunConfig RunConfig::from_json(const json& j) {
    static const std::set<std::string> keys{"command", "preset", "spec", "theta", "n", "eps", "panels",
                                            "order", "grading_levels", "grading_ratio", "endpoint_levels",
                                            "nodes", "tol", "delta", "ladder", "battery", "matrix_route",
                                            "sweep", "out", "seed"};
    if (!j.is_object()) throw InputError("config: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) throw InputError("config: unknown key '" + it.key() + "'");
    RunConfig c;
    try {
        c.command = j.value("command", std::string());
        c.preset = j.value("preset", std::string());
        c.spec = j.value("spec", std::string());
        read_opt(j, "theta", c.theta);
        read_opt(j, "n", c.n);
        read_opt(j, "eps", c.eps);
        read_opt(j, "panels", c.panels);
        read_opt(j, "order", c.order);
        read_opt(j, "grading_levels", c.grading_levels);
        read_opt(j, "grading_ratio", c.grading_ratio);
        read_opt(j, "endpoint_levels", c.endpoint_levels);
        read_opt(j, "nodes", c.nodes);
        c.tol = j.value("tol", c.tol);
        c.delta = j.value("delta", c.delta);
        c.ladder = j.value("ladder", c.ladder);
        c.battery = j.value("battery", c.battery);
        c.matrix_route = j.value("matrix_route", c.matrix_route);
        c.sweep = j.value("sweep", c.sweep);
        c.out = j.value("out", c.out);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    return c;
}

void RunConfig::validate() const {
    if (!kCommands.count(command)) throw InputError("config: unknown command '" + command + "'");
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("config: tol must lie in (0, 1)");
    if (!(delta > 0.0)) throw DomainError("config: delta must be positive");
    if (!preset.empty() && !spec.empty()) throw InputError("config: give either a preset or a spec file, not both");
    if (nodes && *nodes < 4) throw DomainError("config: nodes must be at least 4");
    for (int l : ladder)
        if (l < 0) throw DomainError("config: ladder levels must be nonnegative");
    mesh_params(*this).validate();
}

void resolve_defaults(RunConfig& c, bool smooth) {
    auto set = [](auto& field, auto value) {
        if (!field) field = value;
    };
    if (c.command == "wedge") {
        set(c.panels, 1);
        set(c.order, 12);
        set(c.grading_levels, 16);
    } else if (c.command == "essential" || c.command == "convergence") {
        set(c.panels, smooth ? 16 : 2);
        set(c.order, 8);
        set(c.grading_levels, 40);
        if (c.command == "convergence" && c.ladder.empty()) c.ladder = {10, 20, 40};
    } else if (c.command == "perturb") {
        MeshParams g = default_graph_mesh_params();
        set(c.panels, g.panels_per_arc);
        set(c.order, g.order);
        set(c.grading_levels, g.grading_levels);
        set(c.endpoint_levels, g.endpoint_levels);
    } else if (c.command == "szego") {
        set(c.nodes, 512);
    }
    MeshParams d;
    set(c.panels, d.panels_per_arc);
    set(c.order, d.order);
    set(c.grading_levels, d.grading_levels);
    set(c.grading_ratio, d.grading_ratio);
    set(c.endpoint_levels, *c.grading_levels);
}

MeshParams mesh_params(const RunConfig& c) {
    MeshParams p;
    if (c.panels) p.panels_per_arc = *c.panels;
    if (c.order) p.order = *c.order;
    if (c.grading_levels) p.grading_levels = *c.grading_levels;
    if (c.grading_ratio) p.grading_ratio = *c.grading_ratio;
    if (c.endpoint_levels) p.endpoint_levels = *c.endpoint_levels;
    return p;
}

namespace {

Boundary geometry_of(const RunConfig& c, const std::string& fallback) {
    if (!c.spec.empty()) return load_curve_spec(c.spec);
    if (!c.preset.empty()) return preset(c.preset);
    if (!fallback.empty()) return preset(fallback);
    throw InputError(c.command + ": needs --preset or --spec");
}

json corners_json(const Boundary& b) {
    json out = json::array();
    for (const Corner& c : b.corners())
        out.push_back({{"vertex", {c.vertex.real(), c.vertex.imag()}},
                       {"half_angle", c.half_angle},
                       {"lipschitz_M", c.lipschitz_M}});
    return out;
}

std::string path_in(const RunConfig& c, const std::string& name) {
    return (std::filesystem::path(c.out) / name).string();
}

void write_summary(const RunConfig& c, json body) {
    body["command"] = c.command;
    body["config"] = c.to_json();
    write_text_file(path_in(c, "summary.json"), body.dump(2) + "\n");
}

void cmd_wedge(const RunConfig& c, std::ostream& log) {
    if (!c.theta) throw InputError("wedge: --theta is required");
    Boundary b = make_wedge(*c.theta);
    Mesh m = build_mesh(b, mesh_params(c));
    SpectrumReport r = eigs_skew(assemble_ks(m));
    SupPhi sp = wedge_sup_phi(*c.theta, c.tol);
    annotate(r, {sp.s_star, sp.xi_star}, c.delta);
    write_text_file(path_in(c, "spectrum.csv"), spectrum_csv(r));
    double rel = sp.s_star > 0 ? std::abs(r.op_norm - sp.s_star) / sp.s_star : r.op_norm;
    write_summary(c, {{"theta", *c.theta},
                      {"s_star", sp.s_star},
                      {"xi_star", sp.xi_star},
                      {"n", r.size},
                      {"op_norm", r.op_norm},
                      {"relative_error", rel},
                      {"fill_fraction", r.fill_fraction},
                      {"max_gap", r.max_gap}});
    log << "wedge theta=" << *c.theta << " N=" << r.size << " s*=" << sp.s_star << " |A|=" << r.op_norm << "\n";
}

void cmd_essential(const RunConfig& c, const Boundary& b, std::ostream& log) {
    SpectrumInterval iv = essential_spectrum(b.corners());
    Mesh m = build_mesh(b, mesh_params(c));
    SpectrumReport r = eigs_skew(assemble_ks(m));
    annotate(r, iv, c.delta);
    json outside = json::array();
    for (double v : r.mu)
        if (std::abs(v) > iv.s_star + c.delta) outside.push_back(v);
    write_text_file(path_in(c, "spectrum.csv"), spectrum_csv(r));
    write_summary(c, {{"s_star", iv.s_star},
                      {"xi_star", iv.xi_star},
                      {"corners", corners_json(b)},
                      {"n", r.size},
                      {"op_norm", r.op_norm},
                      {"fill_fraction", r.fill_fraction},
                      {"max_gap", r.max_gap},
                      {"mu_outside_interval", outside}});
    log << "essential N=" << r.size << " s*=" << iv.s_star << " |A|=" << r.op_norm << " fill=" << r.fill_fraction
        << "\n";
}

void cmd_convergence(const RunConfig& c, const Boundary& b, std::ostream& log) {
    std::vector<MeshParams> ladder;
    for (int l : c.ladder) {
        MeshParams p = mesh_params(c);
        p.grading_levels = l;
        p.endpoint_levels = l;
        ladder.push_back(p);
    }
    auto rows = convergence_study(b, ladder, c.delta);
    write_text_file(path_in(c, "convergence.csv"), convergence_csv(rows));
    json table = json::array();
    for (const ConvergenceRow& r : rows)
        table.push_back({{"n", r.n}, {"op_norm", r.op_norm}, {"fill", r.fill}, {"max_gap", r.max_gap}});
    write_summary(c, {{"s_star", essential_spectrum(b.corners()).s_star}, {"rows", table}});
    log << "convergence: " << rows.size() << " levels\n";
}

json comb_json(const CombReport& r) {
    json j{{"n", r.n},
           {"eps", r.eps},
           {"af0_norm_sq_exact", r.af0_norm_sq_exact},
           {"lower_bound", r.lower_bound},
           {"implied_cauchy_norm_sq", r.implied_cauchy_norm_sq},
           {"implied_cauchy_norm", r.implied_cauchy_norm},
           {"matrix_route", r.matrix_route}};
    j["af0_norm_sq_matrix"] = r.matrix_route ? json(r.af0_norm_sq_matrix) : json(nullptr);
    j["nodes_per_interval"] = r.matrix_route ? json(r.nodes_per_interval) : json(nullptr);
    return j;
}

void cmd_comb(const RunConfig& c, std::ostream& log) {
    std::vector<CombReport> rows;
    if (c.sweep) {
        for (int n = 1; n <= 10; ++n)
            for (double eps : {0.001, 0.002, 0.005, 0.01, 0.02, 0.05}) rows.push_back(comb_report({n, eps}, c.tol, false));
    } else {
        if (!c.n || !c.eps) throw InputError("comb: --n and --eps are required (or --sweep)");
        rows.push_back(comb_report({*c.n, *c.eps}, c.tol, c.matrix_route));
    }
    write_text_file(path_in(c, "comb.csv"), comb_csv(rows));
    json list = json::array();
    bool ok = true;
    for (const CombReport& r : rows) {
        list.push_back(comb_json(r));
        ok = ok && r.af0_norm_sq_exact >= r.lower_bound;
    }
    json body{{"rows", list}, {"all_above_bound", ok}};
    if (!c.sweep) body["lower_bound"] = rows.front().lower_bound;
    write_summary(c, body);
    log << "comb: " << rows.size() << " case(s), all above bound: " << (ok ? "yes" : "no") << "\n";
}

void cmd_szego(const RunConfig& c, const Boundary& b, std::ostream& log) {
    Mesh m = build_periodic_mesh(b, static_cast<std::size_t>(*c.nodes));
    OperatorMatrix C = plemelj(assemble_cauchy(m));
    SzegoResult s = szego_from_ks(C);
    json fixed = json::object();
    const char* names[] = {"1", "z", "z2"};
    for (int k = 0; k < 3; ++k) {
        CVector v = weighted_samples(m, [k](Complex z) { return std::pow(z, k); });
        fixed[names[k]] = (s.s.m * v - v).norm();
    }
    ProjectionGap pg = projection_gap(C.m, 1e-6);
    const ProjectionReport& r = s.report;
    write_summary(c, {{"n", m.size()},
                      {"idempotency_defect", r.idempotency_defect},
                      {"self_adjoint_defect", r.self_adjoint_defect},
                      {"cauchy_defect", r.cauchy_defect},
                      {"cauchy_norm", r.cauchy_norm},
                      {"ks_norm", r.ks_norm},
                      {"min_singular_i_plus_a", r.min_singular_i_plus_a},
                      {"projection_gap", pg.gap},
                      {"projection_gap_predicted", pg.predicted},
                      {"fixed_point_defects", fixed}});
    log << "szego N=" << m.size() << " ||S^2-S||=" << r.idempotency_defect << " ||S-S*||=" << r.self_adjoint_defect
        << "\n";
}

std::vector<BatteryCase> load_battery(const std::string& name) {
    if (name == "default") return default_battery();
    json doc;
    try {
        doc = json::parse(read_text_file(name));
    } catch (const json::exception& e) {
        throw InputError("battery '" + name + "': " + e.what());
    }
    if (!doc.is_object() || !doc.contains("cases") || !doc.at("cases").is_array())
        throw InputError("battery: expected {\"cases\": [...]}");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "cases") throw InputError("battery: unknown key '" + it.key() + "'");
    std::vector<BatteryCase> out;
    for (const json& cj : doc.at("cases")) {
        if (!cj.is_object()) throw InputError("battery: cases are objects");
        for (auto it = cj.begin(); it != cj.end(); ++it)
            if (it.key() != "M" && it.key() != "shape" && it.key() != "p_sup")
                throw InputError("battery: unknown key '" + it.key() + "'");
        try {
            out.push_back({cj.at("M").get<double>(), cj.at("shape").get<std::string>(), cj.at("p_sup").get<double>()});
        } catch (const json::exception& e) {
            throw InputError(std::string("battery case: ") + e.what());
        }
        if (!(out.back().p_sup >= 0.0)) throw DomainError("battery: p_sup must be nonnegative");
    }
    return out;
}

void cmd_perturb(const RunConfig& c, std::ostream& log) {
    std::vector<BatteryCase> cases = load_battery(c.battery);
    MeshParams p = mesh_params(c);
    BatteryResult res = run_battery(cases, p);
    write_text_file(path_in(c, "battery.csv"), battery_csv(res.rows));
    json list = json::array();
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const ResidualReport& r = res.reports[k];
        list.push_back({{"M", cases[k].M},
                        {"p_id", cases[k].p_id},
                        {"p_sup", r.p_sup},
                        {"n", r.n},
                        {"e_mp", r.e_mp},
                        {"e_pm", r.e_pm},
                        {"e_mm", r.e_mm},
                        {"e_pp", r.e_pp},
                        {"bound", r.bound},
                        {"block_reconstruction_error", r.block_reconstruction_error},
                        {"k_reconstruction_error", r.k_reconstruction_error},
                        {"adjoint_error", r.adjoint_error},
                        {"decay_mm", r.decay_mm},
                        {"decay_pp", r.decay_pp}});
    }
    write_summary(c, {{"cases", list}, {"all_pass", res.all_pass()}});
    log << "perturb: " << cases.size() << " cases, all pass: " << (res.all_pass() ? "yes" : "no") << "\n";
}

}  // namespace

void run_command(RunConfig c, std::ostream& log) {
    if (!kCommands.count(c.command)) throw InputError("unknown command '" + c.command + "'");
    std::optional<Boundary> geom;
    bool smooth = false;
    if (c.command == "essential" || c.command == "convergence" || c.command == "szego") {
        geom = geometry_of(c, c.command == "szego" ? "ellipse:1,0.8" : "");
        smooth = geom->corners().empty();
    }
    resolve_defaults(c, smooth);
    c.validate();
    std::filesystem::create_directories(c.out);
    if (c.command == "wedge") cmd_wedge(c, log);
    else if (c.command == "essential") cmd_essential(c, *geom, log);
    else if (c.command == "convergence") cmd_convergence(c, *geom, log);
    else if (c.command == "comb") cmd_comb(c, log);
    else if (c.command == "szego") cmd_szego(c, *geom, log);
    else cmd_perturb(c, log);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const InputError*>(&e) ||
        dynamic_cast<const UnsupportedGeometry*>(&e))
        return 2;
    if (dynamic_cast<const ResourceError*>(&e)) return 3;
    return 4;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kerzman-Stein operator laboratory"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string config_path;

    struct Flags {
        std::optional<double> theta, eps, ratio;
        std::optional<int> n, panels, order, levels, endpoint, nodes;
        std::optional<double> tol, delta;
        std::optional<std::string> preset, spec, out, battery, ladder;
        std::optional<std::uint64_t> seed;
        bool no_matrix = false, sweep = false;
    } f;

    auto common = [&](CLI::App* s) {
        s->add_option("--panels", f.panels, "panels per arc");
        s->add_option("--order", f.order, "Gauss-Legendre order per panel");
        s->add_option("--grading-levels", f.levels, "geometric refinement levels at corners");
        s->add_option("--grading-ratio", f.ratio, "refinement ratio in (0,1)");
        s->add_option("--endpoint-levels", f.endpoint, "refinement levels at open ends");
        s->add_option("--tol", f.tol, "tolerance");
        s->add_option("--delta", f.delta, "fill-fraction resolution");
        s->add_option("--out", f.out, "output directory");
        s->add_option("--seed", f.seed, "seed recorded with the run");
        s->add_option("--config", config_path, "RunConfig JSON file; flags override it");
    };
    auto geometry = [&](CLI::App* s) {
        s->add_option("--preset", f.preset, "square | triangle | circle[:r] | ellipse[:a,b] | wedge:theta | comb:n,eps");
        s->add_option("--spec", f.spec, "curve-spec JSON file");
    };

    CLI::App* wedge = app.add_subcommand("wedge", "spectrum of the symmetric wedge");
    wedge->add_option("--theta", f.theta, "half-angle in (0, pi)")->required();
    common(wedge);
    CLI::App* ess = app.add_subcommand("essential", "essential spectrum prediction and discrete spectrum");
    geometry(ess);
    common(ess);
    CLI::App* conv = app.add_subcommand("convergence", "refinement study");
    geometry(conv);
    conv->add_option("--ladder", f.ladder, "comma separated grading levels, e.g. 10,20,40");
    common(conv);
    CLI::App* comb = app.add_subcommand("comb", "comb lower bound");
    comb->add_option("--n", f.n, "number of gaps");
    comb->add_option("--eps", f.eps, "total separation in (0, 1/4)");
    comb->add_flag("--no-matrix", f.no_matrix, "skip the Nystrom route");
    comb->add_flag("--sweep", f.sweep, "exact route over the default (n, eps) grid");
    common(comb);
    CLI::App* sz = app.add_subcommand("szego", "Cauchy and Szego projections on a smooth closed curve");
    geometry(sz);
    sz->add_option("--nodes", f.nodes, "number of trapezoid nodes");
    common(sz);
    CLI::App* pert = app.add_subcommand("perturb", "graph perturbation residual battery");
    pert->add_option("--battery", f.battery, "'default' or a battery JSON file");
    common(pert);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        err << app.help();
        return 2;
    }

    try {
        if (!config_path.empty()) cfg = RunConfig::from_json(json::parse(read_text_file(config_path)));
        for (CLI::App* s : app.get_subcommands()) cfg.command = s->get_name();
        if (f.theta) cfg.theta = f.theta;
        if (f.n) cfg.n = f.n;
        if (f.eps) cfg.eps = f.eps;
        if (f.panels) cfg.panels = f.panels;
        if (f.order) cfg.order = f.order;
        if (f.levels) cfg.grading_levels = f.levels;
        if (f.ratio) cfg.grading_ratio = f.ratio;
        if (f.endpoint) cfg.endpoint_levels = f.endpoint;
        if (f.nodes) cfg.nodes = f.nodes;
        if (f.tol) cfg.tol = *f.tol;
        if (f.delta) cfg.delta = *f.delta;
        if (f.preset) cfg.preset = *f.preset;
        if (f.spec) cfg.spec = *f.spec;
        if (f.out) cfg.out = *f.out;
        if (f.battery) cfg.battery = *f.battery;
        if (f.seed) cfg.seed = *f.seed;
        if (f.no_matrix) cfg.matrix_route = false;
        if (f.sweep) cfg.sweep = true;
        if (f.ladder) {
            cfg.ladder.clear();
            std::stringstream ss(*f.ladder);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                std::size_t used = 0;
                int v = 0;
                try {
                    v = std::stoi(tok, &used);
                } catch (const std::exception&) {
                    throw InputError("--ladder: bad level '" + tok + "'");
                }
                if (used != tok.size()) throw InputError("--ladder: bad level '" + tok + "'");
                cfg.ladder.push_back(v);
            }
        }
        run_command(cfg, out);
        return 0;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace kslab
