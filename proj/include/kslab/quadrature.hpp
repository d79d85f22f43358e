#pragma once

#include <vector>

namespace kslab {

// Gauss-Legendre rule on [-1, 1]
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

GaussRule gauss_legendre(int order);

}  // namespace kslab
