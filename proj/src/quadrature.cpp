#include "kslab/quadrature.hpp"

#include <cmath>

#include "kslab/errors.hpp"
#include "kslab/types.hpp"

namespace kslab {

GaussRule gauss_legendre(int order) {
    if (order < 1) throw DomainError("gauss_legendre: order must be positive");
    GaussRule r;
    r.x.resize(order);
    r.w.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[order - 1 - i] = x;
        r.w[i] = w;
        r.w[order - 1 - i] = w;
    }
    if (order % 2 == 1) r.x[order / 2] = 0.0;
    return r;
}

}  // namespace kslab
