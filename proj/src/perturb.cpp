#include "kslab/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"

namespace kslab {

MeshParams default_graph_mesh_params() {
    MeshParams p;
    p.panels_per_arc = 4;
    p.order = 12;
    p.grading_levels = 12;
    p.endpoint_levels = 12;
    return p;
}

double sampled_sup(const std::function<double(double)>& f, double left, double right, int samples) {
    if (samples < 2) throw DomainError("sampled_sup: need at least 2 samples");
    double s = 0.0;
    for (int k = 0; k < samples; ++k) {
        double x = k == samples - 1 ? right : left + (right - left) * k / (samples - 1);
        s = std::max(s, std::abs(f(x)));
    }
    return s;
}

bool ResidualReport::all_pass() const {
    return pass_mp && pass_pm && std::all_of(pass_k.begin(), pass_k.end(), [](bool b) { return b; });
}

double residual_bound(double M, double p_sup) {
    if (!(p_sup >= 0.0)) throw DomainError("residual_bound: p_sup must be nonnegative");
    double s = std::abs(M) + p_sup;
    return p_sup * 3.0 * std::sqrt(1.0 + s * s);
}

std::array<double, 4> k_bounds(double M, double p_sup) {
    if (!(p_sup >= 0.0)) throw DomainError("k_bounds: p_sup must be nonnegative");
    double s = std::abs(M) + p_sup;
    double odd = 2.0 * std::pow(1.0 + s * s, 0.25) * p_sup * pi;
    double even = std::sqrt(1.0 + M * M) * p_sup * pi;
    return {odd, even, odd, even};
}

double singular_value_decay(const CMatrix& block, int k) {
    if (k < 1) throw DomainError("singular_value_decay: k must be at least 1");
    RVector s = singular_values(block);
    if (s.size() < k || s(0) == 0.0) return 0.0;
    return s(k - 1) / s(0);
}

namespace {

GraphCurve flat_like(const GraphCurve& g) {
    GraphCurve f = g;
    f.p = [](double) { return 0.0; };
    f.dp = [](double) { return 0.0; };
    return f;
}

}  // namespace

ResidualReport residual_blocks(const GraphCurve& g, const MeshParams& params) {
    g.validate();
    if (!(g.left < 0.0 && g.right > 0.0)) throw DomainError("residual_blocks: interval must contain 0 in its interior");
    if (std::abs(g.p(0.0)) > 1e-12 || std::abs(g.dp(0.0)) > 1e-12)
        throw DomainError("residual_blocks: need p(0) = p'(0) = 0");

    ResidualReport r;
    r.p_sup = sampled_sup(g.dp, g.left, g.right);
    const GraphMesh gm = build_graph_mesh(g.left, g.right, params);
    r.n = gm.size();
    const GraphCurve g0 = flat_like(g);
    OperatorMatrix D = assemble_graph_ks(g, gm);
    D.m -= assemble_graph_ks(g0, gm).m;

    NodeMask minus, plus;
    for (std::size_t i = 0; i < gm.size(); ++i) (gm.x[i] < 0.0 ? minus : plus).push_back(i);
    const BlockDecomposition blocks = localized_blocks(D, {minus, plus});
    r.block_reconstruction_error = (D.m - blocks.reconstruct(D.size())).cwiseAbs().maxCoeff();

    const CMatrix& Emm = blocks.block(0, 0);
    const CMatrix& Emp = blocks.block(0, 1);
    const CMatrix& Epm = blocks.block(1, 0);
    const CMatrix& Epp = blocks.block(1, 1);
    r.e_mm = spectral_norm(Emm);
    r.e_mp = spectral_norm(Emp);
    r.e_pm = spectral_norm(Epm);
    r.e_pp = spectral_norm(Epp);
    r.adjoint_error = (Epm + Emp.adjoint()).cwiseAbs().maxCoeff();
    r.decay_mm = singular_value_decay(Emm, 50);
    r.decay_pp = singular_value_decay(Epp, 50);

    // K1..K4 on x < 0 < y
    std::array<CMatrix, 4> K;
    for (CMatrix& k : K) k.resize(minus.size(), plus.size());
    const double M = g.M;
    const Complex onem(1.0, M);
    for (std::size_t c = 0; c < plus.size(); ++c) {
        const std::size_t j = plus[c];
        const double y = gm.x[j];
        const double hy = g.h(y), dpy = g.dphi(y);
        for (std::size_t rr = 0; rr < minus.size(); ++rr) {
            const std::size_t i = minus[rr];
            const double x = gm.x[i];
            const double hx = g.h(x), dpx = g.dphi(x);
            const double dx = gm.diff(i, j);
            const double dphi = M * (std::abs(y) - std::abs(x)) + (g.p(y) - g.p(x));
            const Complex d(dx, dphi), dbar(dx, -dphi);
            const Complex d0(dx, M * (y + x)), d0bar(dx, -M * (y + x));
            const double wt = std::sqrt(gm.w[i] * gm.w[j]);
            K[0](rr, c) = wt * (std::sqrt(hx / hy) * Complex(1.0, dpy) - onem) / d;
            K[1](rr, c) = wt * onem * (1.0 / d - 1.0 / d0);
            K[2](rr, c) = wt * (std::sqrt(hy / hx) * Complex(1.0, -dpx) - onem) / dbar;
            K[3](rr, c) = wt * onem * (1.0 / dbar - 1.0 / d0bar);
        }
    }
    const Complex two_pi_i(0.0, 2.0 * pi);
    CMatrix recon = (K[0] + K[1] - K[2] - K[3]) / two_pi_i;
    r.k_reconstruction_error = spectral_norm(recon - Emp);

    r.bound = residual_bound(M, r.p_sup);
    r.k_bound = k_bounds(M, r.p_sup);
    r.pass_mp = r.e_mp <= r.bound;
    r.pass_pm = r.e_pm <= r.bound;
    for (int q = 0; q < 4; ++q) {
        r.k[q] = spectral_norm(K[q]);
        r.pass_k[q] = r.k[q] <= r.k_bound[q];
    }
    return r;
}

namespace {

void require_section5_form(const GraphCurve& g) {
    g.validate();
    if (g.M != 0.0) throw DomainError("perturbation: curves must have M = 0");
    if (sampled_sup(g.dp, g.left, g.right) >= 1.0) throw DomainError("perturbation: need ||p'|| < 1");
}

double sup_deriv_diff(const GraphCurve& g1, const GraphCurve& g2, const GraphMesh& gm) {
    auto diff = [&](double x) { return g1.dp(x) - g2.dp(x); };
    double s = sampled_sup(diff, g1.left, g1.right);
    for (double x : gm.x) s = std::max(s, std::abs(diff(x)));
    return s;
}

void require_same_interval(const GraphCurve& g1, const GraphCurve& g2) {
    if (g1.left != g2.left || g1.right != g2.right) throw InputError("perturbation: curves must share the interval");
}

}  // namespace

PerturbationRatio perturbation_ratio(const GraphCurve& g1, const GraphCurve& g2, const MeshParams& params) {
    require_section5_form(g1);
    require_section5_form(g2);
    require_same_interval(g1, g2);
    const GraphMesh gm = build_graph_mesh(g1.left, g1.right, params);
    CMatrix D = assemble_graph_ks(g1, gm).m - assemble_graph_ks(g2, gm).m;
    PerturbationRatio r;
    r.norm_diff = spectral_norm(D);
    r.sup_deriv_diff = sup_deriv_diff(g1, g2, gm);
    if (r.sup_deriv_diff == 0.0) {
        if (r.norm_diff > 1e-14) throw ContractError("perturbation_ratio: operators differ while p' agree");
        r.ratio = 0.0;
    } else {
        r.ratio = r.norm_diff / r.sup_deriv_diff;
    }
    r.decay = singular_value_decay(D, 50);
    return r;
}

EDecomposition e_decomposition_check(const GraphCurve& g1, const GraphCurve& g2, const MeshParams& params) {
    require_section5_form(g1);
    require_section5_form(g2);
    require_same_interval(g1, g2);
    const GraphMesh gm = build_graph_mesh(g1.left, g1.right, params);
    const std::size_t n = gm.size();
    CMatrix D = assemble_graph_ks(g1, gm).m - assemble_graph_ks(g2, gm).m;

    std::vector<double> p1(n), p2(n), h1(n), h2(n), d1(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        p1[i] = g1.p(gm.x[i]);
        p2[i] = g2.p(gm.x[i]);
        d1[i] = g1.dp(gm.x[i]);
        d2[i] = g2.dp(gm.x[i]);
        h1[i] = std::hypot(1.0, d1[i]);
        h2[i] = std::hypot(1.0, d2[i]);
    }
    std::array<CMatrix, 3> E;
    for (CMatrix& e : E) e = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const Complex t1 = Complex(1.0, d1[j]) / std::sqrt(h1[j]);
        const Complex t2 = Complex(1.0, d2[j]) / std::sqrt(h2[j]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const double dx = gm.diff(i, j);
            const Complex f1 = 1.0 / Complex(1.0, (p1[j] - p1[i]) / dx);
            const Complex f2 = 1.0 / Complex(1.0, (p2[j] - p2[i]) / dx);
            const double wt = std::sqrt(gm.w[i] * gm.w[j]);
            const double s1 = std::sqrt(h1[i]), s2 = std::sqrt(h2[i]);
            E[0](i, j) = wt * s1 * t1 / dx * (f1 - f2);
            E[1](i, j) = wt * s1 * (t1 - t2) / dx * f2;
            E[2](i, j) = wt * (s1 - s2) * t2 / dx * f2;
        }
    }
    CMatrix sum = CMatrix::Zero(n, n);
    EDecomposition out;
    for (int k = 0; k < 3; ++k) {
        // E_{k+3}(x, y) = conj(E_k(y, x))
        sum += E[k] + E[k].adjoint();
        out.term_norms[k] = spectral_norm(E[k]);
        out.term_norms[k + 3] = out.term_norms[k];
    }
    const Complex two_pi_i(0.0, 2.0 * pi);
    out.reconstruction_error = spectral_norm(D - sum / two_pi_i);
    out.sup_deriv_diff = sup_deriv_diff(g1, g2, gm);
    return out;
}

std::array<double, 2> h_inequality_ratios(int grid) {
    if (grid < 2) throw DomainError("h_inequality_ratios: grid must have at least 2 points");
    std::vector<double> a(grid);
    std::vector<Complex> tf(grid);
    std::vector<double> qr(grid);
    for (int k = 0; k < grid; ++k) {
        a[k] = -1.0 + 2.0 * k / (grid - 1);
        qr[k] = std::pow(1.0 + a[k] * a[k], 0.25);
        tf[k] = Complex(1.0, a[k]) / qr[k];
    }
    std::array<double, 2> worst{0.0, 0.0};
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            if (i == j) continue;
            double gap = std::abs(a[i] - a[j]);
            worst[0] = std::max(worst[0], std::abs(tf[i] - tf[j]) / gap);
            worst[1] = std::max(worst[1], std::abs(qr[i] - qr[j]) / gap);
        }
    return worst;
}

GraphCurve BatteryCase::curve() const {
    GraphCurve g;
    g.M = M;
    if (p_id == "quadratic") {
        const double c = p_sup / 2.0;  // p' = 2cx peaks at |x| = 1
        g.p = [c](double x) { return c * x * x; };
        g.dp = [c](double x) { return 2.0 * c * x; };
    } else if (p_id == "sinusoid") {
        const double c = p_sup / pi;  // p' = c pi sin(pi x)
        g.p = [c](double x) { return c * (1.0 - std::cos(pi * x)); };
        g.dp = [c](double x) { return c * pi * std::sin(pi * x); };
    } else {
        throw InputError("battery: unknown shape '" + p_id + "'");
    }
    return g;
}

std::vector<BatteryCase> default_battery() {
    const double Ms[] = {0.25, 0.5, 1.0, 2.0};
    const double sups[] = {0.02, 0.1, 0.3};
    std::vector<BatteryCase> out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) out.push_back({Ms[i], (i + j) % 2 == 0 ? "quadratic" : "sinusoid", sups[j]});
    return out;
}

bool BatteryResult::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const BatteryRow& r) { return r.pass; });
}

BatteryResult run_battery(const std::vector<BatteryCase>& cases, const MeshParams& p) {
    BatteryResult out;
    for (const BatteryCase& c : cases) {
        ResidualReport r = residual_blocks(c.curve(), p);
        auto row = [&](const char* name, double v, double b, bool ok) {
            out.rows.push_back({c.M, c.p_id, c.p_sup, name, v, b, ok});
        };
        row("E-+", r.e_mp, r.bound, r.pass_mp);
        row("E+-", r.e_pm, r.bound, r.pass_pm);
        const char* names[] = {"K1", "K2", "K3", "K4"};
        for (int q = 0; q < 4; ++q) row(names[q], r.k[q], r.k_bound[q], r.pass_k[q]);
        out.reports.push_back(r);
    }
    return out;
}

}  // namespace kslab
