#pragma once

#include "kslab/mesh.hpp"

namespace kslab {

// spectral: periodic trapezoid mesh with the cotangent singularity split off and
//           integrated exactly in Fourier space
// punctured: plain Nystrom on any mesh of a smooth closed curve, curvature diagonal
enum class CauchyRule { spectral, punctured };

// singular part C0 in symmetric weighting
OperatorMatrix assemble_cauchy(const Mesh& m, CauchyRule rule = CauchyRule::spectral);
// C = C0 + I/2
OperatorMatrix plemelj(const OperatorMatrix& c0);
// A = C - C^H, exactly skew by construction
OperatorMatrix ks_from_cauchy(const OperatorMatrix& c);

struct ProjectionReport {
    double idempotency_defect = 0.0;    // ||S^2 - S||
    double self_adjoint_defect = 0.0;   // ||S - S^H||
    double cauchy_defect = 0.0;         // ||C^2 - C||
    double cauchy_norm = 0.0;           // ||C||
    double ks_norm = 0.0;               // ||A||
    double min_singular_i_plus_a = 0.0;
};

struct SzegoResult {
    OperatorMatrix s;
    ProjectionReport report;
};

// S = C (I + A)^{-1}
SzegoResult szego_from_ks(const OperatorMatrix& c);

// samples of f at the mesh nodes in symmetric weighting: sqrt(w_i) f(z_i)
CVector weighted_samples(const Mesh& m, const std::function<Complex(Complex)>& f);

}  // namespace kslab
