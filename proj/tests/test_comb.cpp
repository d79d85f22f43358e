#include <doctest.h>

#include <cmath>
#include <random>

#include "kslab/comb.hpp"
#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"
#include "kslab/mesh.hpp"
#include "oracles.hpp"

using namespace kslab;

namespace {

// composite Gauss-Legendre over panels graded toward both ends
double brute_norm_sq(const CombSpec& spec) {
    double sum = 0.0;
    for (int j = 1; j <= spec.n; ++j) {
        double a = spec.alpha(j);
        auto g2 = [a](double x) {
            double v = af0_exact(x, a);
            return v * v;
        };
        // split at alpha and 1 - alpha where the integrand changes scale
        sum += oracle::simpson(g2, 0.0, a, 2000) + oracle::simpson(g2, a, 1.0 - a, 200000) + oracle::simpson(g2, 1.0 - a, 1.0, 2000);
    }
    return sum;
}

}  // namespace

TEST_CASE("af0 closed form") {
    CHECK(af0_exact(0.5, 0.1) == doctest::Approx((2.0 / pi) * std::atan(5.0)).epsilon(1e-15));
    CHECK(af0_exact(0.5, 0.1) == doctest::Approx(0.87433).epsilon(1e-5));
    CHECK(af0_exact(0.5, 1e-12) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK_THROWS_AS(af0_exact(0.5, 0.0), DomainError);
    for (double x = 0.0; x <= 0.5; x += 0.05) {
        CHECK(af0_exact(x, 0.03) == doctest::Approx(af0_exact(1.0 - x, 0.03)).epsilon(1e-14));
        if (x > 0.0) CHECK(af0_exact(x, 0.03) > af0_exact(x - 0.05, 0.03));
    }
}

TEST_CASE("af0 norm against Simpson") {
    for (CombSpec s : {CombSpec{1, 0.1}, CombSpec{3, 0.02}}) {
        double ref = brute_norm_sq(s);
        CHECK(af0_norm_sq_exact(s) == doctest::Approx(ref).epsilon(1e-9));
    }
    CHECK(af0_norm_sq_exact({1, 0.01}) > af0_norm_sq_exact({1, 0.24}));
}

TEST_CASE("af0 norm at (10, 0.01)") {
    double e = af0_norm_sq_exact({10, 0.01});
    CHECK(e >= 7.49052);
    CHECK(e == doctest::Approx(9.6013197719).epsilon(1e-9));
}

TEST_CASE("exact route exceeds the lower bound on the grid") {
    for (int n = 1; n <= 10; ++n)
        for (double eps : {0.001, 0.002, 0.005, 0.01, 0.02, 0.05})
            CHECK(af0_norm_sq_exact({n, eps}) >= norm_lower_bound(n, eps));
}

TEST_CASE("matrix route matches the exact route") {
    std::size_t per = 0;
    double m = af0_norm_sq_matrix({2, 0.05}, {}, &per);
    CHECK(per > 0);
    CHECK(m == doctest::Approx(af0_norm_sq_exact({2, 0.05})).epsilon(1e-6));
}

TEST_CASE("lower bound") {
    CHECK(norm_lower_bound(10, 0.01) == doctest::Approx(7.49052).epsilon(1e-6));
    CHECK(norm_lower_bound(1, 0.01) == doctest::Approx(0.45446).epsilon(1e-4));
    CHECK(norm_lower_bound(5, 1e-9) == doctest::Approx(5.0).epsilon(1e-3));
    for (int n = 1; n < 10; ++n) CHECK(norm_lower_bound(n + 1, 0.01) > norm_lower_bound(n, 0.01));
    CHECK(norm_lower_bound(4, 0.01) > norm_lower_bound(4, 0.05));
    CHECK_THROWS_AS(norm_lower_bound(0, 0.1), DomainError);
    CHECK_THROWS_AS(norm_lower_bound(2, 0.3), DomainError);
}

TEST_CASE("Cauchy norm from KS norm") {
    CHECK(cauchy_norm_from_ks(0.0) == 1.0);
    CHECK(cauchy_norm_from_ks(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cauchy_norm_from_ks(std::sqrt(7.49052)) * cauchy_norm_from_ks(std::sqrt(7.49052)) ==
          doctest::Approx(8.49052).epsilon(1e-12));
    CHECK_THROWS_AS(cauchy_norm_from_ks(-1.0), DomainError);
}

TEST_CASE("comb report") {
    auto r = comb_report({10, 0.01}, 1e-12, false);
    CHECK_FALSE(r.matrix_route);
    CHECK(r.lower_bound == doctest::Approx(7.49052).epsilon(1e-6));
    CHECK(r.implied_cauchy_norm_sq == doctest::Approx(1.0 + r.lower_bound).epsilon(1e-14));
    CHECK(r.af0_norm_sq_exact >= r.lower_bound);
}

TEST_CASE("Rayleigh quotient bound on a small comb") {
    // uniform panels as in the matrix route; ||A|| >= ||A f0|| / ||f0||
    CombSpec spec{2, 0.1};
    MeshParams p;
    p.panels_per_arc = 10;
    p.grading_levels = 0;
    p.endpoint_levels = 0;
    auto m = build_mesh(make_comb(spec), p);
    double nrm = spectral_norm(assemble_ks(m).m);
    CHECK(nrm >= std::sqrt(af0_norm_sq_exact(spec)) - 1e-3);
}

TEST_CASE("parallel line reference") {
    CHECK(parallel_lines_reference(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(parallel_lines_reference(2) == doctest::Approx(1.20711).epsilon(1e-5));
    double prev = 1.0;
    for (int n : {50, 100, 200}) {
        double ratio = parallel_lines_reference(n) / (2.0 * n / pi);
        CHECK(std::abs(ratio - 1.0) < 1e-3);
        CHECK(std::abs(ratio - 1.0) < prev);
        prev = std::abs(ratio - 1.0);
    }
}

TEST_CASE("projection gap identity") {
    CMatrix P = CMatrix::Zero(3, 3);
    P(0, 0) = 1.0;
    auto g0 = projection_gap(P);
    CHECK(g0.gap <= 1e-15);
    CHECK(g0.predicted <= 1e-15);
    CHECK(g0.norm == doctest::Approx(1.0));

    for (double t : {0.1, 1.0, 7.0}) {
        CMatrix Q = CMatrix::Zero(2, 2);
        Q(0, 0) = 1.0;
        Q(0, 1) = t;
        auto g = projection_gap(Q);
        CHECK(g.gap == doctest::Approx(t).epsilon(1e-12));
        CHECK(g.predicted == doctest::Approx(t).epsilon(1e-12));
    }

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim(2, 40);
    for (int k = 0; k < 100; ++k) {
        int n = dim(rng);
        std::uniform_int_distribution<int> rank(1, n - 1);
        CMatrix Q = oracle::oblique_projection(n, rank(rng), rng);
        auto g = projection_gap(Q, 1e-10);
        CHECK(std::abs(g.gap - g.predicted) <= 1e-10 * std::max(1.0, g.norm));
    }

    CMatrix bad = CMatrix::Identity(2, 2) * 0.5;
    CHECK_THROWS_AS(projection_gap(bad), ContractError);
}
