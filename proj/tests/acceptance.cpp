// One PASS/FAIL line per acceptance criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kslab/cli.hpp"
#include "kslab/comb.hpp"
#include "kslab/io.hpp"
#include "kslab/kernels.hpp"
#include "kslab/linalg.hpp"
#include "kslab/perturb.hpp"
#include "kslab/projections.hpp"
#include "kslab/spectra.hpp"
#include "oracles.hpp"

using namespace kslab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome c1_wedge_endpoint() {
    auto t0 = std::chrono::steady_clock::now();
    const double exact = 1.0 / (2.0 * std::sqrt(2.0));
    const double s = wedge_sup_phi(pi / 4).s_star;
    MeshParams p;
    p.panels_per_arc = 1;
    p.order = 12;
    p.grading_levels = 118;
    p.endpoint_levels = 5;
    auto A = assemble_ks(build_mesh(make_wedge(pi / 4), p));
    double nrm = eigs_skew(A).op_norm;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double rel = std::abs(nrm - exact) / exact;
    Outcome o;
    o.pass = std::abs(s - exact) <= 1e-10 && rel <= 0.05 && secs <= 120.0;
    o.detail = "s*=" + fmt("%.12f", s) + " N=" + std::to_string(A.size()) + " ||A||=" + fmt("%.6f", nrm) +
               " rel.err=" + fmt("%.3g", rel) + " time=" + fmt("%.1fs", secs);
    return o;
}

Outcome c2_symmetry() {
    double worst = 0.0;
    for (double t : {0.3, 0.7, 1.2}) worst = std::max(worst, std::abs(wedge_sup_phi(t).s_star - wedge_sup_phi(pi - t).s_star));
    return {worst <= 1e-10, "max |s*(t)-s*(pi-t)|=" + fmt("%.3g", worst)};
}

Outcome c3_symbol() {
    std::vector<double> grid;
    for (int k = -20; k <= 20; ++k) grid.push_back(0.25 * k);
    double worst = 0.0;
    for (double t : {pi / 6, pi / 4, pi / 3}) worst = std::max(worst, symbol_matches_kernel_ft(t, grid).max_error);
    return {worst <= 1e-6, "max FT error=" + fmt("%.3g", worst)};
}

Outcome c4_triviality() {
    double worst = 0.0;
    for (int panels : {1, 3, 8}) {
        for (int order : {4, 12}) {
            MeshParams p;
            p.panels_per_arc = panels;
            p.order = order;
            worst = std::max(worst, spectral_norm(assemble_ks(build_mesh(make_circle(1.3), p)).m));
            worst = std::max(worst, spectral_norm(assemble_ks(build_mesh(make_wedge(pi / 2), p)).m));
        }
    }
    for (std::size_t n : {31, 200}) worst = std::max(worst, spectral_norm(assemble_ks(build_periodic_mesh(make_circle(0.4), n)).m));
    return {worst <= 1e-12, "max ||A||=" + fmt("%.3g", worst)};
}

Outcome c5_square() {
    auto sq = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto iv = essential_spectrum(sq.corners());
    std::vector<MeshParams> ladder;
    for (int levels : {10, 20, 40}) {
        MeshParams p;
        p.panels_per_arc = 2;
        p.order = 8;
        p.grading_levels = levels;
        ladder.push_back(p);
    }
    auto rows = convergence_study(sq, ladder, 0.01);
    const auto& fine = rows.back();
    bool gaps = rows[1].max_gap < rows[0].max_gap && rows[2].max_gap < rows[1].max_gap;
    Outcome o;
    o.pass = fine.fill >= 0.9 && fine.op_norm <= iv.s_star + 0.02 && gaps;
    std::ostringstream d;
    d << "N=" << fine.n << " fill=" << fmt("%.3f", fine.fill) << " max|mu|=" << fmt("%.6f", fine.op_norm)
      << " gaps=" << fmt("%.4g", rows[0].max_gap) << "," << fmt("%.4g", rows[1].max_gap) << ","
      << fmt("%.4g", rows[2].max_gap);
    o.detail = d.str();
    return o;
}

Outcome c6_comb() {
    CombSpec s{10, 0.01};
    double e = af0_norm_sq_exact(s);
    double m = af0_norm_sq_matrix(s);
    bool grid = true;
    for (int n = 1; n <= 10; ++n)
        for (double eps : {0.001, 0.002, 0.005, 0.01, 0.02, 0.05})
            grid = grid && af0_norm_sq_exact({n, eps}) > norm_lower_bound(n, eps);
    double lb = 7.49052;
    Outcome o;
    o.pass = std::abs(e - m) <= 1e-6 && e >= lb && m >= lb && grid;
    o.detail = "exact=" + fmt("%.10f", e) + " matrix=" + fmt("%.10f", m) + " grid " + (grid ? "ok" : "violated");
    return o;
}

Outcome c7_projection_gap() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(2, 40);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        int n = dim(rng);
        std::uniform_int_distribution<int> rank(1, n - 1);
        auto g = projection_gap(oracle::oblique_projection(n, rank(rng), rng), 1e-10);
        worst = std::max(worst, std::abs(g.gap - g.predicted));
    }
    auto C = plemelj(assemble_cauchy(build_periodic_mesh(make_ellipse(1.0, 0.8), 512)));
    auto g = projection_gap(C.m, 1e-6);
    double cd = std::abs(g.gap - g.predicted);
    return {worst <= 1e-10 && cd <= 1e-6, "random max=" + fmt("%.3g", worst) + " ellipse=" + fmt("%.3g", cd)};
}

Outcome c8_szego() {
    auto m = build_periodic_mesh(make_ellipse(1.0, 0.8), 512);
    auto res = szego_from_ks(plemelj(assemble_cauchy(m)));
    double fix = 0.0;
    for (int k = 0; k <= 2; ++k) {
        CVector v = weighted_samples(m, [k](Complex z) { return std::pow(z, k); });
        fix = std::max(fix, (res.s.m * v - v).norm() / v.norm());
    }
    const auto& r = res.report;
    return {r.idempotency_defect <= 1e-6 && r.self_adjoint_defect <= 1e-6 && fix <= 1e-6,
            "||S^2-S||=" + fmt("%.3g", r.idempotency_defect) + " ||S-S*||=" + fmt("%.3g", r.self_adjoint_defect) +
                " fixed=" + fmt("%.3g", fix)};
}

Outcome c9_battery() {
    auto res = run_battery(default_battery());
    double recon = 0.0, adj = 0.0, margin = 0.0;
    bool ok = true;
    for (const auto& r : res.reports) {
        recon = std::max(recon, r.block_reconstruction_error);
        adj = std::max(adj, r.adjoint_error);
        margin = std::max(margin, r.e_mp / r.bound);
        ok = ok && r.e_mp <= r.bound;
    }
    ok = ok && res.reports.size() == 12 && recon <= 1e-12 && adj <= 1e-13;
    return {ok, "cases=" + std::to_string(res.reports.size()) + " max ||E-+||/bound=" + fmt("%.3g", margin) +
                    " recon=" + fmt("%.3g", recon) + " adjoint=" + fmt("%.3g", adj)};
}

Outcome c10_lipschitz() {
    GraphCurve flat;
    flat.p = [](double) { return 0.0; };
    flat.dp = [](double) { return 0.0; };
    std::vector<double> ratios;
    double recon = 0.0;
    for (double d : {0.1, 0.05, 0.025}) {
        GraphCurve g;
        g.p = [d](double x) { return d * std::sin(pi * x); };
        g.dp = [d](double x) { return d * pi * std::cos(pi * x); };
        ratios.push_back(perturbation_ratio(g, flat).ratio);
        recon = std::max(recon, e_decomposition_check(g, flat).reconstruction_error);
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    double spread = (hi - lo) / lo;
    return {spread <= 0.10 && recon <= 1e-12,
            "ratios=" + fmt("%.6f", ratios[0]) + "," + fmt("%.6f", ratios[1]) + "," + fmt("%.6f", ratios[2]) +
                " spread=" + fmt("%.3g", spread) + " recon=" + fmt("%.3g", recon)};
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "kslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome c11_determinism() {
    struct Run {
        std::vector<std::string> args;
        std::string file;
    };
    std::vector<Run> runs = {
        {{"wedge", "--theta", "0.6", "--seed", "3"}, "spectrum.csv"},
        {{"comb", "--n", "4", "--eps", "0.02", "--seed", "3"}, "comb.csv"},
        {{"perturb", "--seed", "3"}, "battery.csv"},
        {{"convergence", "--preset", "triangle", "--ladder", "4,8,12", "--seed", "3"}, "convergence.csv"},
    };
    fs::path root = fs::temp_directory_path() / "kslab_acceptance";
    bool same = true;
    int compared = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        std::string text[2];
        for (int rep = 0; rep < 2; ++rep) {
            fs::path dir = root / (std::to_string(k) + "_" + std::to_string(rep));
            fs::remove_all(dir);
            auto args = runs[k].args;
            args.push_back("--out");
            args.push_back(dir.string());
            if (cli(args) != 0) return {false, "run failed: " + args[0]};
            text[rep] = read_text_file((dir / runs[k].file).string());
        }
        same = same && !text[0].empty() && text[0] == text[1];
        ++compared;
    }
    return {same, std::to_string(compared) + " CSV pairs compared"};
}

}  // namespace

int main() {
    std::vector<std::pair<int, std::function<Outcome()>>> checks = {
        {1, c1_wedge_endpoint}, {2, c2_symmetry},      {3, c3_symbol},   {4, c4_triviality},
        {5, c5_square},         {6, c6_comb},          {7, c7_projection_gap}, {8, c8_szego},
        {9, c9_battery},        {10, c10_lipschitz},   {11, c11_determinism},
    };
    int failed = 0;
    for (auto& [id, fn] : checks) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
