#include "kslab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "kslab/errors.hpp"
#include "kslab/kernels.hpp"
#include "kslab/linalg.hpp"

namespace kslab {

void require_skew(const CMatrix& A) {
    if (A.rows() != A.cols()) throw ContractError("skew check: matrix is not square");
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            if (A(i, j) != -std::conj(A(j, i))) throw ContractError("skew check: matrix is not skew-Hermitian");
}

namespace {

CMatrix minus_i_times(const CMatrix& A) {
    CMatrix H(A.rows(), A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) H(i, j) = Complex(A(i, j).imag(), -A(i, j).real());
    return H;
}

}  // namespace

SpectrumReport eigs_skew(const OperatorMatrix& A) {
    require_skew(A.m);
    RVector w = hermitian_eigenvalues(minus_i_times(A.m));
    SpectrumReport r;
    r.size = static_cast<std::size_t>(w.size());
    r.mu.assign(w.data(), w.data() + w.size());
    std::sort(r.mu.begin(), r.mu.end());
    for (double v : r.mu) r.op_norm = std::max(r.op_norm, std::abs(v));
    return r;
}

SkewEigensystem eigensystem_skew(const OperatorMatrix& A) {
    require_skew(A.m);
    HermitianEigen e = hermitian_eigensystem(minus_i_times(A.m));
    return {std::move(e.values), std::move(e.vectors)};
}

SupPhi wedge_sup_phi(double theta, double tol) {
    if (!(theta > 0.0 && theta < pi)) throw DomainError("wedge_sup_phi: theta must lie in (0, pi)");
    if (!(tol > 0.0)) throw DomainError("wedge_sup_phi: tol must be positive");
    if (theta == pi / 2) return {0.0, 0.0};
    const double xi_max = std::log(2.0 / tol) / (2.0 * std::min(theta, pi - theta));
    auto f = [theta](double xi) { return std::abs(symbol_phi(xi, theta)); };

    // coarse scan to isolate the peak, then golden section
    const int samples = 4096;
    int best = 1;
    double best_val = -1.0;
    for (int k = 1; k < samples; ++k) {
        double v = f(xi_max * k / samples);
        if (v > best_val) best_val = v, best = k;
    }
    double a = xi_max * (best - 1) / samples;
    double b = xi_max * (best + 1) / samples;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (c >= d) break;  // interval collapsed to rounding level
    }
    double xi = 0.5 * (a + b);

    // the peak is flat, so polish the location on phi' = 0
    double lo = std::max(0.0, xi - 1e-3), hi = xi + 1e-3;
    auto dphi = [theta](double x) { return symbol_phi_derivative(x, theta); };
    if (lo > 0.0 && dphi(lo) * dphi(hi) < 0.0) {
        std::uintmax_t iters = 200;
        auto root = boost::math::tools::toms748_solve(dphi, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
        double cand = 0.5 * (root.first + root.second);
        if (f(cand) >= f(xi)) xi = cand;
    }
    return {xi, f(xi)};
}

SpectrumInterval wedge_spectrum(double theta) {
    SupPhi s = wedge_sup_phi(theta);
    return {s.s_star, s.xi_star};
}

SpectrumInterval essential_spectrum(const std::vector<Corner>& corners) {
    SpectrumInterval out;
    for (const Corner& c : corners) {
        SpectrumInterval w = wedge_spectrum(c.half_angle);
        if (w.s_star > out.s_star) out = w;
    }
    return out;
}

double fill_fraction(const SpectrumReport& r, const SpectrumInterval& iv, double delta) {
    if (!(delta > 0.0)) throw DomainError("fill_fraction: delta must be positive");
    std::vector<double> mu = r.mu;
    std::sort(mu.begin(), mu.end());
    if (iv.s_star == 0.0) {
        for (double v : mu)
            if (std::abs(v) > delta) return 0.0;
        return 1.0;
    }
    if (mu.empty()) return 0.0;
    const double s = iv.s_star;
    const long K = std::max(1L, static_cast<long>(std::ceil(2.0 * s / delta)));
    long hit = 0;
    for (long k = 0; k <= K; ++k) {
        double x = -s + 2.0 * s * static_cast<double>(k) / static_cast<double>(K);
        auto it = std::lower_bound(mu.begin(), mu.end(), x);
        double dist = std::numeric_limits<double>::infinity();
        if (it != mu.end()) dist = *it - x;
        if (it != mu.begin()) dist = std::min(dist, x - *(it - 1));
        if (dist <= delta) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(K + 1);
}

double interval_max_gap(const std::vector<double>& mu, const SpectrumInterval& iv) {
    const double s = iv.s_star;
    if (s == 0.0) return 0.0;
    std::vector<double> pts{-s, s};
    for (double v : mu)
        if (v > -s && v < s) pts.push_back(v);
    std::sort(pts.begin(), pts.end());
    double gap = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) gap = std::max(gap, pts[k] - pts[k - 1]);
    return gap;
}

void annotate(SpectrumReport& r, const SpectrumInterval& iv, double delta) {
    r.fill_fraction = fill_fraction(r, iv, delta);
    r.max_gap = interval_max_gap(r.mu, iv);
}

std::vector<ConvergenceRow> convergence_study(const Boundary& b, const std::vector<MeshParams>& ladder,
                                              double delta) {
    if (ladder.size() < 3) throw InputError("convergence_study: ladder needs at least 3 levels");
    const SpectrumInterval iv = essential_spectrum(b.corners());
    std::vector<ConvergenceRow> rows;
    for (const MeshParams& p : ladder) {
        SpectrumReport r = eigs_skew(assemble_ks(build_mesh(b, p)));
        annotate(r, iv, delta);
        rows.push_back({r.size, r.op_norm, r.fill_fraction, r.max_gap});
    }
    return rows;
}

}  // namespace kslab
