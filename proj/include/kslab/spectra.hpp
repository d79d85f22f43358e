#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kslab/geometry.hpp"
#include "kslab/mesh.hpp"

namespace kslab {

// sigma(A) = i * mu
struct SpectrumReport {
    std::vector<double> mu;
    double op_norm = 0.0;
    std::size_t size = 0;
    double fill_fraction = 0.0;
    double max_gap = 0.0;
};

struct SpectrumInterval {
    double s_star = 0.0;
    double xi_star = 0.0;
};

// throws ContractError unless A^H == -A bitwise
void require_skew(const CMatrix& A);

SpectrumReport eigs_skew(const OperatorMatrix& A);

struct SkewEigensystem {
    RVector mu;
    CMatrix vectors;
};
SkewEigensystem eigensystem_skew(const OperatorMatrix& A);

struct SupPhi {
    double xi_star = 0.0;
    double s_star = 0.0;
};
SupPhi wedge_sup_phi(double theta, double tol = 1e-14);

SpectrumInterval wedge_spectrum(double theta);
SpectrumInterval essential_spectrum(const std::vector<Corner>& corners);

double fill_fraction(const SpectrumReport& r, const SpectrumInterval& iv, double delta);
// largest gap between consecutive points of {-s*} + (mu inside the interval) + {s*}
double interval_max_gap(const std::vector<double>& mu, const SpectrumInterval& iv);
void annotate(SpectrumReport& r, const SpectrumInterval& iv, double delta);

struct ConvergenceRow {
    std::size_t n = 0;
    double op_norm = 0.0;
    double fill = 0.0;
    double max_gap = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const Boundary& b, const std::vector<MeshParams>& ladder,
                                              double delta = 0.01);

}  // namespace kslab
