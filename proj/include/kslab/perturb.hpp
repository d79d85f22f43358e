#pragma once

#include <array>
#include <string>
#include <vector>

#include "kslab/geometry.hpp"
#include "kslab/mesh.hpp"

namespace kslab {

// graph mesh used by the residual and perturbation drivers
MeshParams default_graph_mesh_params();

// sup |f| on [left, right] sampled at `samples` equispaced points (endpoints included)
double sampled_sup(const std::function<double(double)>& f, double left, double right, int samples = 20001);

struct ResidualReport {
    std::size_t n = 0;
    double p_sup = 0.0;
    // spectral norms of the sign-quadrant blocks of A_{M,p} - A_{M,0}
    double e_mm = 0.0, e_mp = 0.0, e_pm = 0.0, e_pp = 0.0;
    std::array<double, 4> k{};
    std::array<double, 4> k_bound{};
    double bound = 0.0;
    double block_reconstruction_error = 0.0;
    double k_reconstruction_error = 0.0;
    double adjoint_error = 0.0;
    // sigma_50 / sigma_1 of the compact diagonal blocks
    double decay_mm = 0.0, decay_pp = 0.0;
    bool pass_mp = false, pass_pm = false;
    std::array<bool, 4> pass_k{};

    bool all_pass() const;
};

ResidualReport residual_blocks(const GraphCurve& g, const MeshParams& p = default_graph_mesh_params());
double residual_bound(double M, double p_sup);
std::array<double, 4> k_bounds(double M, double p_sup);

struct PerturbationRatio {
    double norm_diff = 0.0;
    double sup_deriv_diff = 0.0;
    double ratio = 0.0;
    double decay = 0.0;  // sigma_50 / sigma_1 of A1 - A2
};

PerturbationRatio perturbation_ratio(const GraphCurve& g1, const GraphCurve& g2,
                                     const MeshParams& p = default_graph_mesh_params());

struct EDecomposition {
    double reconstruction_error = 0.0;
    std::array<double, 6> term_norms{};
    double sup_deriv_diff = 0.0;
};

EDecomposition e_decomposition_check(const GraphCurve& g1, const GraphCurve& g2,
                                     const MeshParams& p = default_graph_mesh_params());

// max over grid pairs of |(1+ia)/(1+a^2)^{1/4} - (1+ib)/(1+b^2)^{1/4}| / |a-b| and
// of |(1+a^2)^{1/4} - (1+b^2)^{1/4}| / |a-b|, a, b on a uniform grid of [-1, 1]
std::array<double, 2> h_inequality_ratios(int grid);

// sigma_k / sigma_1 (k is 1-based); 0 when the block has fewer than k singular values
double singular_value_decay(const CMatrix& block, int k);

struct BatteryCase {
    double M = 0.0;
    std::string p_id;  // "quadratic" or "sinusoid"
    double p_sup = 0.0;
    GraphCurve curve() const;
};

// M in {0.25, 0.5, 1, 2} x p_sup in {0.02, 0.1, 0.3}; shapes alternate in a checkerboard
std::vector<BatteryCase> default_battery();

struct BatteryRow {
    double M = 0.0;
    std::string p_id;
    double p_sup = 0.0;
    std::string block;
    double numeric_norm = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct BatteryResult {
    std::vector<BatteryRow> rows;
    std::vector<ResidualReport> reports;
    bool all_pass() const;
};

BatteryResult run_battery(const std::vector<BatteryCase>& cases, const MeshParams& p = default_graph_mesh_params());

}  // namespace kslab
