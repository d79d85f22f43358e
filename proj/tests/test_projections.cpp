#include <doctest.h>

#include <cmath>

#include "kslab/comb.hpp"
#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"
#include "kslab/projections.hpp"
#include "oracles.hpp"

using namespace kslab;

namespace {

OperatorMatrix cauchy_on(const Boundary& b, std::size_t n, CauchyRule rule = CauchyRule::spectral) {
    return plemelj(assemble_cauchy(build_periodic_mesh(b, n), rule));
}

// S applied to f, returned as plain values at the nodes
CVector apply_to_values(const OperatorMatrix& S, const Mesh& m, const std::function<Complex(Complex)>& f) {
    CVector y = S.m * weighted_samples(m, f);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) /= std::sqrt(m.nodes[i].w);
    return y;
}

}  // namespace

TEST_CASE("circle: constant diagonal and exact projection") {
    for (std::size_t n : {65, 64}) {
        auto m = build_periodic_mesh(make_circle(1.0), n);
        auto c0 = assemble_cauchy(m, CauchyRule::punctured);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(c0.m(i, i) - m.nodes[i].w / (4 * pi)) <= 1e-15);
        auto C = cauchy_on(make_circle(1.0), n);
        CHECK(spectral_norm(C.m * C.m - C.m) <= 1e-10);
        CHECK(spectral_norm(ks_from_cauchy(C).m) <= 1e-12);
        auto S = szego_from_ks(C);
        CHECK(spectral_norm(S.s.m - C.m) <= 1e-13);
    }
}

TEST_CASE("ellipse Cauchy projection is idempotent") {
    auto C = cauchy_on(make_ellipse(1.0, 0.8), 512);
    CHECK(spectral_norm(C.m * C.m - C.m) <= 1e-8);
    auto g = projection_gap(C.m, 1e-6);
    CHECK(std::abs(g.gap - g.predicted) <= 1e-6);
}

TEST_CASE("Plemelj: KS from Cauchy") {
    auto b = make_ellipse(1.0, 0.8);
    auto m = build_periodic_mesh(b, 256);
    auto c0 = assemble_cauchy(m);
    auto C = plemelj(c0);
    auto A = ks_from_cauchy(C);
    CHECK(A.m == -A.m.adjoint().eval());
    CMatrix A0 = c0.m - c0.m.adjoint();
    CHECK((A.m - A0).cwiseAbs().maxCoeff() <= 1e-15);

    // punctured rule reproduces the Nystrom KS matrix entry by entry
    auto Ap = ks_from_cauchy(plemelj(assemble_cauchy(m, CauchyRule::punctured)));
    auto K = assemble_ks(m);
    CHECK((Ap.m - K.m).cwiseAbs().maxCoeff() <= 1e-12);

    // spectral rule: same operator to discretisation accuracy
    CHECK(std::abs(spectral_norm(A.m) - spectral_norm(K.m)) <= 1e-8);
    auto f = weighted_samples(m, [](Complex z) { return std::exp(std::conj(z)); });
    CHECK((A.m * f - K.m * f).norm() <= 1e-8 * f.norm());
}

TEST_CASE("Szego projection on the ellipse") {
    auto b = make_ellipse(1.0, 0.8);
    auto m = build_periodic_mesh(b, 512);
    auto C = plemelj(assemble_cauchy(m));
    auto res = szego_from_ks(C);
    CHECK(res.report.idempotency_defect <= 1e-6);
    CHECK(res.report.self_adjoint_defect <= 1e-6);
    CHECK(res.report.min_singular_i_plus_a >= 1.0 - 1e-12);
    for (int k = 0; k <= 2; ++k) {
        auto f = [k](Complex z) { return std::pow(z, k); };
        CVector v = weighted_samples(m, f);
        CHECK((res.s.m * v - v).norm() <= 1e-6 * v.norm());
    }
    // a conjugate-holomorphic function is mapped onto its mean value
    CVector g = weighted_samples(m, [](Complex z) { return std::conj(z); });
    CHECK((res.s.m * g).norm() < g.norm());
}

TEST_CASE("Szego matrices converge under refinement") {
    auto b = make_ellipse(1.0, 0.8);
    auto f = [](Complex z) { return std::conj(z) * std::conj(z) + z; };
    std::vector<double> diffs;
    CVector prev;
    for (std::size_t n : {16, 32, 64, 128}) {
        auto m = build_periodic_mesh(b, n);
        auto S = szego_from_ks(plemelj(assemble_cauchy(m))).s;
        CVector cur = apply_to_values(S, m, f);
        if (prev.size() > 0) {
            double d = 0.0;
            for (Eigen::Index i = 0; i < prev.size(); ++i) d = std::max(d, std::abs(prev(i) - cur(2 * i)));
            diffs.push_back(d);
        }
        prev = cur;
    }
    for (std::size_t k = 1; k < diffs.size(); ++k) CHECK(diffs[k] < diffs[k - 1]);
    CHECK(diffs.back() <= 1e-6);
}

TEST_CASE("projections need a smooth closed curve") {
    MeshParams p;
    auto sq = build_mesh(make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), p);
    CHECK_THROWS_AS(assemble_cauchy(sq), UnsupportedGeometry);
    CHECK_THROWS_AS(assemble_cauchy(build_mesh(make_wedge(pi / 4), p)), UnsupportedGeometry);
    CHECK_THROWS_AS(assemble_cauchy(build_mesh(make_ellipse(1.0, 0.8), p), CauchyRule::spectral), UnsupportedGeometry);
    CHECK_NOTHROW(assemble_cauchy(build_mesh(make_ellipse(1.0, 0.8), p), CauchyRule::punctured));
}
