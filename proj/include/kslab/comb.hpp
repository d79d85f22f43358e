#pragma once

#include <cstddef>

#include "kslab/geometry.hpp"
#include "kslab/types.hpp"

namespace kslab {

// g(x) = (1/pi)(arctan((1-x)/alpha) + arctan(x/alpha)): A f0 restricted to a row at height alpha
double af0_exact(double x, double alpha);

// sum_{j>=1} int_0^1 g_j^2 by adaptive Gauss-Kronrod
double af0_norm_sq_exact(const CombSpec& spec, double quad_tol = 1e-12);

struct CombMatrixParams {
    int order = 12;
    // panel width as a multiple of the smallest spacing alpha_1
    double panel_width = 2.0;
    std::size_t max_nodes_per_interval = 20000;
};

// Nystrom route: apply the comb KS operator to the indicator of I_0, sum squares over I_1..I_n
double af0_norm_sq_matrix(const CombSpec& spec, const CombMatrixParams& p = {}, std::size_t* nodes_per_interval = nullptr);

double norm_lower_bound(int n, double eps);
double cauchy_norm_from_ks(double a);
double parallel_lines_reference(int n_lines);

struct CombReport {
    int n = 0;
    double eps = 0.0;
    double af0_norm_sq_exact = 0.0;
    double af0_norm_sq_matrix = 0.0;
    bool matrix_route = false;
    std::size_t nodes_per_interval = 0;
    double lower_bound = 0.0;
    double implied_cauchy_norm_sq = 0.0;
    double implied_cauchy_norm = 0.0;
};

CombReport comb_report(const CombSpec& spec, double quad_tol = 1e-12, bool matrix_route = true,
                       const CombMatrixParams& p = {});

struct ProjectionGap {
    double gap = 0.0;        // ||P - P^H||
    double predicted = 0.0;  // sqrt(||P||^2 - 1), via the range/kernel angle
    double norm = 0.0;       // ||P||
};

// idem_tol bounds ||P^2 - P|| relative to ||P||
ProjectionGap projection_gap(const CMatrix& P, double idem_tol = 1e-12);

}  // namespace kslab
