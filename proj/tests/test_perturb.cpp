#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kslab/errors.hpp"
#include "kslab/perturb.hpp"
#include "oracles.hpp"

using namespace kslab;

namespace {

GraphCurve quad(double M, double c) {
    GraphCurve g;
    g.M = M;
    g.p = [c](double x) { return c * x * x; };
    g.dp = [c](double x) { return 2 * c * x; };
    return g;
}

GraphCurve sine(double delta) {
    GraphCurve g;
    g.p = [delta](double x) { return delta * std::sin(pi * x); };
    g.dp = [delta](double x) { return delta * pi * std::cos(pi * x); };
    return g;
}

GraphCurve flat() { return quad(0.0, 0.0); }

MeshParams small_mesh() {
    MeshParams p = default_graph_mesh_params();
    p.panels_per_arc = 2;
    p.grading_levels = 8;
    p.endpoint_levels = 8;
    return p;
}

}  // namespace

TEST_CASE("bounds") {
    CHECK(residual_bound(1.0, 0.1) == doctest::Approx(0.3 * std::sqrt(1.0 + 1.21)).epsilon(1e-15));
    CHECK(residual_bound(1.0, 0.1) == doctest::Approx(0.445984).epsilon(1e-5));
    CHECK(residual_bound(0.5, 0.2) == doctest::Approx(0.73241).epsilon(1e-5));
    CHECK(residual_bound(1.0, 0.0) == 0.0);
    auto k = k_bounds(1.0, 0.1);
    CHECK(k[0] == doctest::Approx(0.76617).epsilon(1e-4));
    CHECK(k[1] == doctest::Approx(0.44429).epsilon(1e-4));
    for (double v : k_bounds(0.5, 0.0)) CHECK(v == 0.0);
    CHECK_THROWS_AS(residual_bound(1.0, -0.1), DomainError);
}

TEST_CASE("sampled sup") {
    CHECK(sampled_sup([](double x) { return std::sin(pi * x); }, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(sampled_sup([](double x) { return x; }, -2.0, 1.0) == 2.0);
}

TEST_CASE("residual blocks vanish without perturbation") {
    auto r = residual_blocks(quad(1.0, 0.0));
    CHECK(r.e_mm == 0.0);
    CHECK(r.e_mp == 0.0);
    CHECK(r.e_pm == 0.0);
    CHECK(r.e_pp == 0.0);
    CHECK(r.all_pass());
}

TEST_CASE("residual blocks for a quadratic bump") {
    auto r = residual_blocks(quad(1.0, 0.05));
    CHECK(r.n == 672);
    CHECK(r.p_sup == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.e_mp < residual_bound(1.0, 0.1));
    CHECK(r.e_mp > 0.0);
    CHECK(r.adjoint_error <= 1e-13);
    CHECK(r.block_reconstruction_error <= 1e-12);
    CHECK(r.k_reconstruction_error <= 1e-12);
    CHECK(r.decay_mm < 0.01);
    CHECK(r.decay_pp < 0.01);
    for (int q = 0; q < 4; ++q) CHECK(r.k[q] <= r.k_bound[q]);
    CHECK(r.all_pass());
}

TEST_CASE("residual blocks need p(0) = p'(0) = 0") {
    GraphCurve g = quad(1.0, 0.1);
    g.p = [](double x) { return 0.1 + x * x; };
    CHECK_THROWS_AS(residual_blocks(g), DomainError);
    g = sine(0.1);
    CHECK_THROWS_AS(residual_blocks(g), DomainError);
    g = quad(1.0, 0.1);
    g.dp = nullptr;
    CHECK_THROWS_AS(residual_blocks(g), InputError);
}

TEST_CASE("perturbation ratio") {
    auto same = perturbation_ratio(sine(0.1), sine(0.1), small_mesh());
    CHECK(same.norm_diff == 0.0);
    CHECK(same.ratio == 0.0);

    std::vector<double> ratios;
    for (double d : {0.1, 0.05, 0.025}) {
        auto r = perturbation_ratio(sine(d), flat(), small_mesh());
        CHECK(r.sup_deriv_diff == doctest::Approx(d * pi).epsilon(1e-12));
        ratios.push_back(r.ratio);
    }
    auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo <= 1.1);

    GraphCurve cubic;
    cubic.p = [](double x) { return 0.1 * x * x + 0.01 * x * x * x; };
    cubic.dp = [](double x) { return 0.2 * x + 0.03 * x * x; };
    auto r = perturbation_ratio(quad(0.0, 0.1), cubic, small_mesh());
    CHECK(r.sup_deriv_diff == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);

    CHECK_THROWS_AS(perturbation_ratio(sine(0.5), flat(), small_mesh()), DomainError);
    CHECK_THROWS_AS(perturbation_ratio(quad(1.0, 0.1), flat(), small_mesh()), DomainError);
}

TEST_CASE("E decomposition") {
    auto z = e_decomposition_check(sine(0.1), sine(0.1), small_mesh());
    for (double t : z.term_norms) CHECK(t == 0.0);
    CHECK(z.reconstruction_error == 0.0);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        double a = 0.05 * u(rng), b = 0.05 * u(rng), c = 0.05 * u(rng);
        GraphCurve g;
        g.p = [=](double x) { return a * std::sin(pi * x) + b * x * x + c * std::cos(2 * x); };
        g.dp = [=](double x) { return a * pi * std::cos(pi * x) + 2 * b * x - 2 * c * std::sin(2 * x); };
        auto e = e_decomposition_check(g, sine(0.02), small_mesh());
        CHECK(e.reconstruction_error <= 1e-12);
        for (int k = 0; k < 3; ++k) CHECK(e.term_norms[k] == e.term_norms[k + 3]);
    }

    // each term stays below a fixed multiple of ||(p1 - p2)'|| as delta shrinks
    std::vector<std::array<double, 6>> scaled;
    for (double d : {0.1, 0.05, 0.025}) {
        auto e = e_decomposition_check(sine(d), flat(), small_mesh());
        std::array<double, 6> s{};
        for (int k = 0; k < 6; ++k) s[k] = e.term_norms[k] / e.sup_deriv_diff;
        scaled.push_back(s);
    }
    for (int k = 0; k < 6; ++k)
        for (const auto& s : scaled) CHECK(s[k] <= 1.1 * scaled.front()[k]);
}

TEST_CASE("elementary inequalities on [-1, 1]") {
    auto r = h_inequality_ratios(1000);
    CHECK(r[0] <= std::sqrt(2.0));
    CHECK(r[1] <= 1.0);
    CHECK(r[0] > 0.9);
    CHECK_THROWS_AS(h_inequality_ratios(1), DomainError);
}

TEST_CASE("singular value decay") {
    CMatrix D = CMatrix::Zero(60, 60);
    for (int k = 0; k < 60; ++k) D(k, k) = std::pow(0.5, k);
    CHECK(singular_value_decay(D, 3) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(singular_value_decay(CMatrix::Identity(10, 10), 50) == 0.0);
}

TEST_CASE("default battery") {
    auto cases = default_battery();
    REQUIRE(cases.size() == 12);
    int quads = 0;
    for (const auto& c : cases) {
        auto g = c.curve();
        CHECK(g.p(0.0) == 0.0);
        CHECK(g.dp(0.0) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(sampled_sup(g.dp, -1.0, 1.0) == doctest::Approx(c.p_sup).epsilon(1e-8));
        quads += c.p_id == "quadratic";
    }
    CHECK(quads == 6);
    BatteryCase bad{1.0, "cubic", 0.1};
    CHECK_THROWS_AS(bad.curve(), InputError);

    auto res = run_battery(cases);
    CHECK(res.rows.size() == 12 * 6);
    CHECK(res.all_pass());
    for (const auto& r : res.reports) {
        CHECK(r.block_reconstruction_error <= 1e-12);
        CHECK(r.adjoint_error <= 1e-13);
    }
}
