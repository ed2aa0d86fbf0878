#include <cmath>
#include <numbers>
#include <stdexcept>

#include "muskat/multipliers.hpp"
#include "muskat/spectral.hpp"
#include "muskat/sphere.hpp"

namespace muskat {
namespace {

int checked_dim(std::span<const double> slope, std::span<const double> z) {
    const auto dim = static_cast<int>(z.size());
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("frequency must have 1 to 3 components");
    if (slope.size() != z.size()) throw std::invalid_argument("slope and frequency dimensions differ");
    return dim;
}

bool is_zero(std::span<const double> z) {
    for (double v : z) {
        if (v != 0.0) return false;
    }
    return true;
}

}  // namespace

std::complex<double> symbol_D(const MultiplierSpec& spec, std::span<const double> z) {
    const int dim = checked_dim(spec.slope, z);
    spec.op.validate(dim);
    if (spec.op.profile->arity() != 1) throw std::invalid_argument("multiplier profile must take one argument");
    if (is_zero(z)) return 0.0;
    const SphereRule rule = make_sphere_rule(dim, z);
    double sum = 0.0;
    double arg[1];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto& w = rule.nodes[q];
        double dot = 0.0;
        double along = 0.0;
        double mono = 1.0;
        for (int d = 0; d < dim; ++d) {
            dot += w[d] * z[d];
            along += spec.slope[d] * w[d];
            for (int e = 0; e < spec.op.nu[d]; ++e) mono *= w[d];
        }
        if (dot == 0.0) continue;
        arg[0] = along * along;
        const double kernel = spec.op.profile->value(arg) * std::pow(along, spec.op.n) * mono;
        sum += rule.weights[q] * (dot > 0.0 ? kernel : -kernel);
    }
    const double m = -0.5 * std::numbers::pi * sum / unit_sphere_area(dim);
    return {0.0, m};
}

double symbol_T(std::span<const double> slope, std::span<const double> z) {
    const int dim = checked_dim(slope, z);
    if (is_zero(z)) return 0.0;
    const ProfilePtr phi = base_profile(dim);
    const SphereRule rule = make_sphere_rule(dim, z);
    double sum = 0.0;
    double arg[1];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto& w = rule.nodes[q];
        double dot = 0.0;
        double along = 0.0;
        for (int d = 0; d < dim; ++d) {
            dot += w[d] * z[d];
            along += slope[d] * w[d];
        }
        arg[0] = along * along;
        sum += rule.weights[q] * std::abs(dot) * phi->value(arg);
    }
    return 0.5 * std::numbers::pi * sum / unit_sphere_area(dim);
}

double symbol_T_bound(std::span<const double> slope) {
    double a2 = 0.0;
    for (double v : slope) a2 += v * v;
    const double arg[1] = {a2};
    return 0.5 * base_profile(static_cast<int>(slope.size()))->value(arg);
}

MultiplierSymbol MultiplierSymbol::identity() { return MultiplierSymbol(); }

ScalarField apply_multiplier(const MultiplierSymbol& symbol, const ScalarField& u) {
    if (symbol.is_identity()) return u;
    const int dim = u.grid().dim;
    double imag = 0.0;
    ScalarField out = apply_spectral_symbol(
        u,
        [&](const std::array<double, kMaxDim>& z) {
            return symbol(std::span<const double>(z.data(), static_cast<std::size_t>(dim)));
        },
        &imag);
    const double scale = std::max(max_abs(u), 1e-300);
    if (imag > 1e-10 * scale)
        throw std::domain_error("multiplier symbol is not Hermitian: imaginary output " + std::to_string(imag));
    return out;
}

double reduction_identity_residual(const MultiplierSpec& spec, std::span<const std::vector<double>> zs) {
    if (spec.op.n < 1) throw std::invalid_argument("reduction identity needs n >= 1");
    double worst = 0.0;
    for (const auto& z : zs) {
        const std::complex<double> whole = symbol_D(spec, z);
        std::complex<double> parts = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            MultiplierSpec lower = spec;
            lower.op.n -= 1;
            lower.op.nu[k] += 1;
            parts += spec.slope[k] * symbol_D(lower, z);
        }
        worst = std::max(worst, std::abs(whole - parts));
    }
    return worst;
}

double slope_identity_residual(std::span<const double> slope, std::span<const double> tilt,
                               std::span<const std::vector<double>> zs) {
    const auto dim = static_cast<int>(slope.size());
    if (tilt.size() != slope.size()) throw std::invalid_argument("slope and tilt dimensions differ");
    const ProfilePtr phi = base_profile(dim);
    const ProfilePtr dphi = phi->derivative(0);
    std::vector<double> a(slope.begin(), slope.end());
    double a2 = 0.0;
    double ab = 0.0;
    for (int d = 0; d < dim; ++d) {
        a2 += slope[d] * slope[d];
        ab += slope[d] * tilt[d];
    }
    double worst = 0.0;
    for (const auto& z : zs) {
        const std::complex<double> iu(0.0, 1.0);
        double az = 0.0;
        for (int d = 0; d < dim; ++d) az += slope[d] * z[d];
        std::complex<double> lhs = 0.0;
        std::complex<double> rhs = 0.0;
        for (int i = 0; i < dim; ++i) {
            const MultiplierSpec axial{{phi, 0, unit_index(i)}, a};
            lhs += tilt[i] * symbol_D(axial, z) * iu * az;
        }
        for (int k = 0; k < dim; ++k) {
            std::complex<double> bracket = 0.0;
            for (int i = 0; i < dim; ++i) {
                MultiIndex nu = unit_index(i);
                nu[k] += 1;
                const MultiplierSpec bent{{dphi, 1, nu}, a};
                bracket += -2.0 * (1.0 + a2) * tilt[i] * symbol_D(bent, z);
            }
            const MultiplierSpec axial{{phi, 0, unit_index(k)}, a};
            bracket -= ab * symbol_D(axial, z);
            rhs += bracket * iu * z[k];
        }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace muskat
