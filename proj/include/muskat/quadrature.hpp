#pragma once

#include <vector>

namespace muskat {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [a, b]; points must be 16, 32 or 64.
[[nodiscard]] QuadratureRule gauss_legendre(int points, double a = -1.0, double b = 1.0);

}  // namespace muskat
