#include "kslab/comb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"
#include "kslab/mesh.hpp"

namespace kslab {

double af0_exact(double x, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("af0_exact: alpha must be positive");
    return (std::atan((1.0 - x) / alpha) + std::atan(x / alpha)) / pi;
}

double af0_norm_sq_exact(const CombSpec& spec, double quad_tol) {
    spec.validate();
    if (!(quad_tol > 0.0)) throw DomainError("af0_norm_sq_exact: quad_tol must be positive");
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    for (int j = 1; j <= spec.n; ++j) {
        const double alpha = spec.alpha(j);
        auto g2 = [alpha](double x) {
            double g = af0_exact(x, alpha);
            return g * g;
        };
        // g changes on the scale alpha near both ends; cut geometrically toward them
        std::vector<double> left{0.0};
        for (double c = alpha; c < 0.5; c *= 2.0) left.push_back(c);
        left.push_back(0.5);
        std::vector<double> cuts = left;
        for (auto it = left.rbegin() + 1; it != left.rend(); ++it) cuts.push_back(1.0 - *it);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (cuts[k + 1] <= cuts[k]) continue;
            double err = 0.0;
            // pieces are resolved by construction; deep recursion only inflates the error estimate
            double v = GK::integrate(g2, cuts[k], cuts[k + 1], 8, quad_tol, &err);
            if (err > 10.0 * quad_tol * std::max(1.0, std::abs(v))) {
                std::ostringstream msg;
                msg << "af0_norm_sq_exact: quadrature error estimate " << err << " on interval " << j;
                throw NumericError(msg.str());
            }
            total += v;
        }
    }
    return total;
}

double af0_norm_sq_matrix(const CombSpec& spec, const CombMatrixParams& p, std::size_t* nodes_per_interval) {
    spec.validate();
    const double width = p.panel_width * spec.alpha(1);
    MeshParams mp;
    mp.order = p.order;
    mp.panels_per_arc = static_cast<int>(std::ceil(1.0 / width));
    mp.grading_levels = 0;
    mp.endpoint_levels = 0;
    const std::size_t per = static_cast<std::size_t>(mp.panels_per_arc) * static_cast<std::size_t>(mp.order);
    if (per > p.max_nodes_per_interval)
        throw ResourceError("comb matrix route: " + std::to_string(per) + " nodes per interval exceed the limit");
    mp.max_nodes = per * static_cast<std::size_t>(spec.n + 1);
    const Mesh m = build_mesh(make_comb(spec), mp);
    if (nodes_per_interval) *nodes_per_interval = per;

    const std::vector<std::size_t> cols = m.nodes_on_arc(0);
    CVector f0(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) f0(c) = std::sqrt(m.nodes[cols[c]].w);
    double total = 0.0;
    for (int j = 1; j <= spec.n; ++j) {
        CVector y = apply_ks_block(m, m.nodes_on_arc(static_cast<std::size_t>(j)), cols, f0);
        total += y.squaredNorm();
    }
    return total;
}

double norm_lower_bound(int n, double eps) {
    CombSpec{n, eps}.validate();
    const double r = std::sqrt(eps);
    return n * (1.0 - (4.0 * pi + 8.0) / (3.0 * pi) * r) - (2.0 * pi + 4.0) / pi * r;
}

double cauchy_norm_from_ks(double a) {
    if (!(a >= 0.0)) throw DomainError("cauchy_norm_from_ks: a must be nonnegative");
    return std::sqrt(1.0 + a * a);
}

double parallel_lines_reference(int n_lines) {
    if (n_lines < 1) throw DomainError("parallel_lines_reference: need at least one line");
    return 0.5 / std::tan(pi / (4.0 * n_lines));
}

CombReport comb_report(const CombSpec& spec, double quad_tol, bool matrix_route, const CombMatrixParams& p) {
    CombReport r;
    r.n = spec.n;
    r.eps = spec.eps;
    r.af0_norm_sq_exact = af0_norm_sq_exact(spec, quad_tol);
    r.matrix_route = matrix_route;
    if (matrix_route) r.af0_norm_sq_matrix = af0_norm_sq_matrix(spec, p, &r.nodes_per_interval);
    r.lower_bound = norm_lower_bound(spec.n, spec.eps);
    // ||A||^2 >= lower_bound, so ||C||^2 = 1 + ||A||^2 >= 1 + lower_bound
    r.implied_cauchy_norm_sq = 1.0 + r.lower_bound;
    r.implied_cauchy_norm = cauchy_norm_from_ks(std::sqrt(std::max(0.0, r.lower_bound)));
    return r;
}

ProjectionGap projection_gap(const CMatrix& P, double idem_tol) {
    if (P.rows() != P.cols()) throw InputError("projection_gap: matrix is not square");
    const Eigen::Index n = P.rows();
    ProjectionGap out;
    if (n == 0) return out;
    Svd svd = full_svd(P);
    out.norm = svd.s(0);
    const double defect = spectral_norm(P * P - P);
    if (defect > idem_tol * std::max(1.0, out.norm)) {
        std::ostringstream msg;
        msg << "projection_gap: ||P^2 - P|| = " << defect << " exceeds tolerance";
        throw ContractError(msg.str());
    }
    out.gap = spectral_norm(P - P.adjoint());
    Eigen::Index r = 0;
    while (r < svd.s.size() && svd.s(r) > 0.5) ++r;
    if (r == 0 || r == n) return out;
    // cosine of the smallest angle between range and kernel; ||P|| = 1/sin
    const double c = std::min(1.0, spectral_norm(svd.U.leftCols(r).adjoint() * svd.V.rightCols(n - r)));
    out.predicted = c / std::sqrt((1.0 - c) * (1.0 + c));
    return out;
}

}  // namespace kslab
