#include "kslab/projections.hpp"

#include <cmath>

#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"

namespace kslab {

namespace {

void require_smooth_closed(const Mesh& m) {
    if (!m.boundary) throw UnsupportedGeometry("cauchy: mesh has no boundary");
    const Boundary& b = *m.boundary;
    if (!b.closed()) throw UnsupportedGeometry("cauchy: boundary is not closed");
    if (!b.corners().empty()) throw UnsupportedGeometry("cauchy: boundary has corners");
    for (const Arc& a : b.arcs())
        if (a.kind() == ArcKind::line_segment) throw UnsupportedGeometry("cauchy: needs curved C2 arcs");
}

// discrete conjugate-function matrix on N equispaced points, Nyquist mode sent to -i
CMatrix hilbert_matrix(std::size_t n) {
    const bool even = n % 2 == 0;
    const std::size_t top = even ? n / 2 - 1 : (n - 1) / 2;
    CMatrix H(n, n);
    std::vector<Complex> row(n);
    for (std::size_t k = 0; k < n; ++k) {
        double beta = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
        double s = 0.0;
        if (k != 0) s = std::sin(0.5 * top * beta) * std::sin(0.5 * (top + 1) * beta) / std::sin(0.5 * beta);
        Complex v = 2.0 * s;
        if (even) v += Complex(0.0, k % 2 == 0 ? -1.0 : 1.0);
        row[k] = v / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) H(i, j) = row[(i + n - j) % n];
    return H;
}

}  // namespace

OperatorMatrix assemble_cauchy(const Mesh& m, CauchyRule rule) {
    require_smooth_closed(m);
    const std::size_t n = m.size();
    check_dense_budget(n);
    const Boundary& b = *m.boundary;
    const Complex inv2pii = 1.0 / (2.0 * pi * I);
    OperatorMatrix out;
    out.tag = OperatorTag::cauchy;
    out.mesh = std::make_shared<const Mesh>(m);
    out.m.resize(n, n);

    if (rule == CauchyRule::punctured) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                const MeshNode& a = m.nodes[i];
                if (i == j) {
                    const Arc& arc = b.arcs()[a.arc];
                    Complex d1 = arc.derivative(a.t), d2 = arc.second_derivative(a.t);
                    double kappa = (std::conj(d1) * d2).imag() / std::pow(std::abs(d1), 3);
                    // z''/(2z') in arclength is i kappa / 2
                    out.m(i, i) = inv2pii * Complex(0.0, 0.5 * kappa) * a.w;
                    continue;
                }
                Complex d = m.diff(i, j);
                if (d == Complex(0.0)) throw AssemblyError("assemble_cauchy: coincident nodes");
                out.m(i, j) = inv2pii * m.nodes[j].T / d * std::sqrt(a.w * m.nodes[j].w);
            }
        }
        return out;
    }

    if (!m.periodic || b.arcs().size() != 1) throw UnsupportedGeometry("cauchy: spectral rule needs a periodic mesh");
    const Arc& arc = b.arcs()[0];
    const double h = m.step;
    CMatrix C = -pi * hilbert_matrix(n);
    std::vector<Complex> dz(n);
    for (std::size_t i = 0; i < n; ++i) dz[i] = arc.derivative(m.nodes[i].t);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex r;
            if (i == j) {
                r = arc.second_derivative(m.nodes[i].t) / (2.0 * dz[i]);
            } else {
                Complex d = m.nodes[j].z - m.nodes[i].z;
                if (d == Complex(0.0)) throw AssemblyError("assemble_cauchy: coincident nodes");
                double half = 0.5 * (m.nodes[j].t - m.nodes[i].t);
                r = dz[j] / d - 0.5 * std::cos(half) / std::sin(half);
            }
            C(i, j) += h * r;
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            out.m(i, j) = inv2pii * C(i, j) * std::sqrt(m.nodes[i].w / m.nodes[j].w);
    return out;
}

OperatorMatrix plemelj(const OperatorMatrix& c0) {
    OperatorMatrix c = c0;
    c.m.diagonal().array() += 0.5;
    return c;
}

OperatorMatrix ks_from_cauchy(const OperatorMatrix& c) {
    OperatorMatrix a;
    a.tag = OperatorTag::ks;
    a.mesh = c.mesh;
    const Eigen::Index n = c.size();
    a.m.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.m(j, j) = Complex(0.0, 2.0 * c.m(j, j).imag());
        for (Eigen::Index i = 0; i < j; ++i) {
            Complex v = c.m(i, j) - std::conj(c.m(j, i));
            a.m(i, j) = v;
            a.m(j, i) = -std::conj(v);
        }
    }
    return a;
}

SzegoResult szego_from_ks(const OperatorMatrix& c) {
    const Eigen::Index n = c.size();
    check_dense_budget(static_cast<std::size_t>(n));
    OperatorMatrix a = ks_from_cauchy(c);
    CMatrix ipa = CMatrix::Identity(n, n) + a.m;
    Eigen::PartialPivLU<CMatrix> lu(ipa.transpose());
    CMatrix st = lu.solve(c.m.transpose());
    if (!st.allFinite()) throw NumericError("szego_from_ks: solve produced non-finite values");

    SzegoResult out;
    out.s.m = st.transpose();
    out.s.tag = OperatorTag::szego;
    out.s.mesh = c.mesh;
    const CMatrix& S = out.s.m;
    ProjectionReport& r = out.report;
    r.idempotency_defect = spectral_norm(S * S - S);
    r.self_adjoint_defect = spectral_norm(S - S.adjoint());
    r.cauchy_defect = spectral_norm(c.m * c.m - c.m);
    r.cauchy_norm = spectral_norm(c.m);
    r.ks_norm = spectral_norm(a.m);
    RVector sv = singular_values(ipa);
    r.min_singular_i_plus_a = sv(sv.size() - 1);
    return out;
}

CVector weighted_samples(const Mesh& m, const std::function<Complex(Complex)>& f) {
    CVector v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v(i) = std::sqrt(m.nodes[i].w) * f(m.nodes[i].z);
    return v;
}

}  // namespace kslab
