#include <boost/math/quadrature/gauss.hpp>

#include <stdexcept>

#include "muskat/quadrature.hpp"

namespace muskat {
namespace {

// Boost stores the non-negative half of an even rule.
template <unsigned Points>
QuadratureRule reference_rule() {
    using Rule = boost::math::quadrature::gauss<double, Points>;
    const auto abscissa = Rule::abscissa();
    const auto weights = Rule::weights();
    QuadratureRule rule;
    for (std::size_t i = abscissa.size(); i-- > 0;) {
        rule.nodes.push_back(-abscissa[i]);
        rule.weights.push_back(weights[i]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        rule.nodes.push_back(abscissa[i]);
        rule.weights.push_back(weights[i]);
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int points, double a, double b) {
    QuadratureRule rule;
    switch (points) {
        case 16: rule = reference_rule<16>(); break;
        case 32: rule = reference_rule<32>(); break;
        case 64: rule = reference_rule<64>(); break;
        default: throw std::invalid_argument("gauss_legendre supports 16, 32 or 64 points");
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

}  // namespace muskat
