#pragma once

#include <vector>

#include "kslab/types.hpp"

namespace kslab {

// A(z,w) = (1/2 pi i) [Tw/(w-z) - conj(Tz)/conj(w-z)]
Complex ks_kernel(Complex z, Complex Tz, Complex w, Complex Tw);
// same kernel from a precomputed difference d = w - z
Complex ks_kernel_diff(Complex d, Complex Tz, Complex Tw);

// which ray of the wedge carries z; upper pairs with k_-, lower with k_+
enum class Ray { upper, lower };
enum class Branch { minus, plus };

struct SymbolParams {
    double theta = pi / 4;
    void validate() const;
};

// z = s e^{i theta} on the upper ray, w = t e^{-i theta} (or the mirror for Ray::lower)
Complex wedge_cross_kernel(double s, double t, double theta, Ray z_ray = Ray::upper);
Complex wedge_convolution_kernel(double u, double theta, Branch branch);

double symbol_phi(double xi, double theta);
// d/dxi of symbol_phi
double symbol_phi_derivative(double xi, double theta);

struct SymbolCheck {
    double max_error = 0.0;
    double worst_xi = 0.0;
    double quad_error_estimate = 0.0;
};
// numeric FT of both k_- and k_+ against the symbol formula
SymbolCheck symbol_matches_kernel_ft(double theta, const std::vector<double>& xi_grid);

// h^{1/2}-weighted graph kernel for w = x + i phi(x); takes phi and phi' at x and y
Complex graph_kernel(double x, double y, double phi_x, double phi_y, double dphi_x, double dphi_y);
// variant taking y - x and phi(y) - phi(x) directly
Complex graph_kernel_diff(double dx, double dphi, double dphi_x, double dphi_y);

double comb_kernel(double x, int j, double y, int k, int n, double eps);

}  // namespace kslab
