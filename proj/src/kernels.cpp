#include "kslab/kernels.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

constexpr double inv_two_pi = 1.0 / (2.0 * pi);

// (1/2 pi i) * v
Complex over_two_pi_i(Complex v) { return Complex(v.imag(), -v.real()) * inv_two_pi; }

// e^{|x|-|y|} (1 + s e^{-2|x|}) / (1 + e^{-2|y|}), for |x| <= |y|
double damped_ratio(double x, double y, double s) {
    double ax = std::abs(x), ay = std::abs(y);
    double num = s < 0 ? -std::expm1(-2.0 * ax) : 1.0 + std::exp(-2.0 * ax);
    return std::exp(ax - ay) * num / (1.0 + std::exp(-2.0 * ay));
}

}  // namespace

Complex ks_kernel_diff(Complex d, Complex Tz, Complex Tw) {
    if (d == Complex(0.0)) throw DomainError("ks_kernel: coincident points");
    return over_two_pi_i(Tw / d - std::conj(Tz) / std::conj(d));
}

Complex ks_kernel(Complex z, Complex Tz, Complex w, Complex Tw) { return ks_kernel_diff(w - z, Tz, Tw); }

void SymbolParams::validate() const {
    if (!(theta > 0.0 && theta < pi)) throw DomainError("symbol: theta must lie in (0, pi)");
}

Complex wedge_cross_kernel(double s, double t, double theta, Ray z_ray) {
    if (s == 0.0 && t == 0.0) throw DomainError("wedge_cross_kernel: both points at the vertex");
    double c = std::cos(theta);
    double den = t * t + s * s - 2.0 * s * t * std::cos(2.0 * theta);
    double sign = z_ray == Ray::upper ? 1.0 : -1.0;
    Complex pref = sign * std::polar(c, -sign * theta) / (pi * I);
    return pref * ((t - s) / den);
}

Complex wedge_convolution_kernel(double u, double theta, Branch branch) {
    double sign = branch == Branch::minus ? -1.0 : 1.0;
    double c = std::cos(theta);
    Complex pref = sign * std::polar(c, sign * theta) / (pi * I);
    return pref * (std::sinh(0.5 * u) / (std::cosh(u) - std::cos(2.0 * theta)));
}

double symbol_phi(double xi, double theta) {
    double x = xi * (pi - 2.0 * theta);
    double y = xi * pi;
    if (x == 0.0) return 0.0;
    double sgn = x > 0 ? 1.0 : -1.0;
    return sgn * damped_ratio(x, y, -1.0);
}

double symbol_phi_derivative(double xi, double theta) {
    double a = pi - 2.0 * theta;
    double ch = damped_ratio(a * xi, pi * xi, 1.0);
    return a * ch - pi * symbol_phi(xi, theta) * std::tanh(pi * xi);
}

SymbolCheck symbol_matches_kernel_ft(double theta, const std::vector<double>& xi_grid) {
    SymbolParams{theta}.validate();
    // |k(u)| <= C e^{-|u|/2}; the tail beyond 60 is below 1e-13
    constexpr double cutoff = 60.0;
    constexpr double tol = 1e-13;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double c2 = std::cos(2.0 * theta);
    auto f = [c2](double u) { return std::sinh(0.5 * u) / (std::cosh(u) - c2); };
    const double norm = 1.0 / std::sqrt(2.0 * pi);

    SymbolCheck out;
    for (double xi : xi_grid) {
        if (!std::isfinite(xi)) throw DomainError("symbol check: non-finite xi");
        double re = 0.0, im = 0.0, err_re = 0.0, err_im = 0.0;
        // integrate on unit subintervals so each piece holds a bounded number of oscillations
        for (double lo = -cutoff; lo < cutoff; lo += 1.0) {
            double e1 = 0.0, e2 = 0.0, l1 = 0.0;
            re += GK::integrate([&](double u) { return std::cos(u * xi) * f(u); }, lo, lo + 1.0, 15, tol, &e1, &l1);
            im += GK::integrate([&](double u) { return -std::sin(u * xi) * f(u); }, lo, lo + 1.0, 15, tol, &e2, &l1);
            err_re += e1;
            err_im += e2;
        }
        double est = err_re + err_im;
        out.quad_error_estimate = std::max(out.quad_error_estimate, est);
        if (est > 1e-9) {
            std::ostringstream msg;
            msg << "symbol check: quadrature did not converge at xi=" << xi << " (error estimate " << est << ")";
            throw NumericError(msg.str());
        }
        Complex integral(re, im);
        double phi = symbol_phi(xi, theta);
        for (Branch b : {Branch::minus, Branch::plus}) {
            double sign = b == Branch::minus ? -1.0 : 1.0;
            Complex pref = sign * std::polar(std::cos(theta), sign * theta) / (pi * I);
            Complex numeric = norm * pref * integral;
            Complex expected = b == Branch::minus ? std::polar(norm * phi, -theta) : -std::polar(norm * phi, theta);
            double e = std::abs(numeric - expected);
            if (e > out.max_error) {
                out.max_error = e;
                out.worst_xi = xi;
            }
        }
    }
    return out;
}

Complex graph_kernel_diff(double dx, double dphi, double dphi_x, double dphi_y) {
    if (dx == 0.0 && dphi == 0.0) throw DomainError("graph_kernel: coincident points");
    double hx = std::hypot(1.0, dphi_x);
    double hy = std::hypot(1.0, dphi_y);
    Complex d(dx, dphi);
    Complex v = hx * Complex(1.0, dphi_y) / d - hy * Complex(1.0, -dphi_x) / std::conj(d);
    return over_two_pi_i(v) / std::sqrt(hx * hy);
}

Complex graph_kernel(double x, double y, double phi_x, double phi_y, double dphi_x, double dphi_y) {
    if (x == y) throw DomainError("graph_kernel: x == y");
    return graph_kernel_diff(y - x, phi_y - phi_x, dphi_x, dphi_y);
}

double comb_kernel(double x, int j, double y, int k, int n, double eps) {
    if (j == k) return 0.0;
    double a = eps * (j - k) / n;
    double dx = y - x;
    return a / (pi * (dx * dx + a * a));
}

}  // namespace kslab
