#include <cmath>
#include <numbers>
#include <stdexcept>

#include "muskat/quadrature.hpp"
#include "muskat/sphere.hpp"

namespace muskat {

double unit_sphere_area(int k) {
    const double half = 0.5 * (k + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

std::array<double, 3> unit_axis(int dim, std::span<const double> axis) {
    std::array<double, 3> e{1.0, 0.0, 0.0};
    if (axis.empty()) return e;
    double norm = 0.0;
    for (int d = 0; d < dim; ++d) norm += axis[d] * axis[d];
    norm = std::sqrt(norm);
    if (norm == 0.0) return e;
    e = {0.0, 0.0, 0.0};
    for (int d = 0; d < dim; ++d) e[d] = axis[d] / norm;
    return e;
}

SphereRule circle_rule(const std::array<double, 3>& axis) {
    constexpr int kPanelsPerArc = 8;
    SphereRule rule;
    rule.dim = 2;
    // Arcs start on the two directions orthogonal to the axis.
    const double start = std::atan2(axis[1], axis[0]) - 0.5 * std::numbers::pi;
    const double panel = std::numbers::pi / kPanelsPerArc;
    for (int arc = 0; arc < 2; ++arc) {
        for (int p = 0; p < kPanelsPerArc; ++p) {
            const double a = start + arc * std::numbers::pi + p * panel;
            const QuadratureRule gl = gauss_legendre(16, a, a + panel);
            for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
                rule.nodes.push_back({std::cos(gl.nodes[n]), std::sin(gl.nodes[n]), 0.0});
                rule.weights.push_back(gl.weights[n]);
            }
        }
    }
    return rule;
}

SphereRule sphere_rule(const std::array<double, 3>& pole) {
    constexpr int kAzimuth = 128;
    SphereRule rule;
    rule.dim = 3;
    rule.exact_degree = 63;
    // Orthonormal frame completing the pole.
    std::array<double, 3> seed = std::abs(pole[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                         : std::array<double, 3>{0, 1, 0};
    const double proj = seed[0] * pole[0] + seed[1] * pole[1] + seed[2] * pole[2];
    std::array<double, 3> e1{seed[0] - proj * pole[0], seed[1] - proj * pole[1], seed[2] - proj * pole[2]};
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& c : e1) c /= n1;
    const std::array<double, 3> e2{pole[1] * e1[2] - pole[2] * e1[1], pole[2] * e1[0] - pole[0] * e1[2],
                                   pole[0] * e1[1] - pole[1] * e1[0]};
    const double dphi = 2.0 * std::numbers::pi / kAzimuth;
    for (int half = 0; half < 2; ++half) {
        const QuadratureRule gl = half == 0 ? gauss_legendre(32, -1.0, 0.0) : gauss_legendre(32, 0.0, 1.0);
        for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
            const double t = gl.nodes[n];
            const double s = std::sqrt(1.0 - t * t);
            for (int a = 0; a < kAzimuth; ++a) {
                const double phi = (a + 0.5) * dphi;
                const double c = s * std::cos(phi);
                const double d = s * std::sin(phi);
                rule.nodes.push_back({t * pole[0] + c * e1[0] + d * e2[0], t * pole[1] + c * e1[1] + d * e2[1],
                                      t * pole[2] + c * e1[2] + d * e2[2]});
                rule.weights.push_back(gl.weights[n] * dphi);
            }
        }
    }
    return rule;
}

}  // namespace

SphereRule make_sphere_rule(int dim, std::span<const double> axis) {
    if (!axis.empty() && static_cast<int>(axis.size()) < dim)
        throw std::invalid_argument("sphere rule axis has wrong dimension");
    switch (dim) {
        case 1: {
            SphereRule rule;
            rule.dim = 1;
            rule.nodes = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
            rule.weights = {1.0, 1.0};
            return rule;
        }
        case 2: return circle_rule(unit_axis(2, axis));
        case 3: return sphere_rule(unit_axis(3, axis));
        default: throw std::invalid_argument("sphere rule dimension must be 1, 2 or 3");
    }
}

}  // namespace muskat
