// Quadrature on the unit sphere S^{dim-1} in R^dim.
#pragma once

#include <array>
#include <span>
#include <vector>

namespace muskat {

// Surface area of the unit sphere S^k in R^{k+1}.
[[nodiscard]] double unit_sphere_area(int k);

struct SphereRule {
    int dim = 1;
    std::vector<std::array<double, 3>> nodes;
    std::vector<double> weights;

    // Highest polynomial degree integrated exactly (dim 3); 0 for rules whose
    // accuracy is spectral rather than polynomial.
    int exact_degree = 0;
};

// Rule on S^{dim-1}. A non-zero `axis` splits the sphere along the hyperplane
// orthogonal to it, so integrands that jump across {w . axis = 0} keep full
// accuracy. dim 1: the two points +-1. dim 2: composite Gauss-Legendre in angle,
// 256 nodes. dim 3: 64 x 128 product rule (Gauss in w . axis, uniform in
// azimuth).
[[nodiscard]] SphereRule make_sphere_rule(int dim, std::span<const double> axis = {});

}  // namespace muskat
