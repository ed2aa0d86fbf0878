#include <cmath>
#include <optional>
#include <stdexcept>

#include "muskat/reference.hpp"
#include "muskat/sphere.hpp"

namespace muskat::reference {
namespace {

struct Offset {
    std::array<double, kMaxDim> xi{};
    double factor = 0.0;
};

// Minimal-image offset x - y; empty on the Nyquist face or when x == y.
std::optional<Offset> offset(const GridSpec& grid, std::size_t x, std::size_t y) {
    if (x == y) return std::nullopt;
    const auto ix = grid.unravel(x);
    const auto iy = grid.unravel(y);
    Offset o;
    std::array<int, kMaxDim> m{};
    for (int d = 0; d < grid.dim; ++d) {
        m[d] = ix[d] - iy[d];
        if (2 * m[d] >= grid.points) m[d] -= grid.points;
        if (2 * m[d] < -grid.points) m[d] += grid.points;
        if (2 * std::abs(m[d]) == grid.points) return std::nullopt;
        o.xi[d] = m[d] * grid.spacing();
    }
    o.factor = extrapolation_factor(m, grid.dim);
    return o;
}

double norm(const std::array<double, kMaxDim>& v, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += v[d] * v[d];
    return std::sqrt(s);
}

double prefactor(const GridSpec& grid) { return std::pow(grid.spacing(), grid.dim) / unit_sphere_area(grid.dim); }

// (|xi|^2 + jump^2)^{(dim+1)/2}
double distance_power(double r, double jump, int dim) {
    return std::pow(r * r + jump * jump, 0.5 * (dim + 1));
}

ScalarField corrections_D(const InterfaceGeometry& geom, const ScalarField& beta) {
    ScalarField out = commutator_correction(geom.grid(), MultiIndex{}, geom.f, beta);
    for (int i = 0; i < geom.grid().dim; ++i)
        out = out - principal_correction(geom.grid(), unit_index(i), beta * geom.grad_f[i]);
    return out;
}

}  // namespace

ScalarField apply_B(const OperatorSpec& spec, const std::vector<ScalarField>& a, const std::vector<ScalarField>& b,
                    const ScalarField& beta) {
    const GridSpec& grid = beta.grid();
    spec.validate(grid.dim);
    const int p = spec.profile->arity();
    if (static_cast<int>(a.size()) != p || static_cast<int>(b.size()) != spec.n)
        throw std::invalid_argument("reference apply_B: slot count mismatch");
    const double c = prefactor(grid);
    std::vector<double> out(grid.size(), 0.0);
    std::vector<double> args(static_cast<std::size_t>(p));
    for (std::size_t x = 0; x < grid.size(); ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < grid.size(); ++y) {
            const auto o = offset(grid, x, y);
            if (!o) continue;
                const auto& xi = o->xi;
            const double r = norm(xi, grid.dim);
            for (int q = 0; q < p; ++q) {
                const double dq = (a[q][x] - a[q][y]) / r;
                args[q] = dq * dq;
            }
            double term = spec.profile->value(args);
            for (int s = 0; s < spec.n; ++s) term *= (b[s][x] - b[s][y]) / r;
            for (int d = 0; d < grid.dim; ++d) term *= std::pow(xi[d] / r, spec.nu[d]);
            sum += o->factor * term * beta[y] / std::pow(r, grid.dim);
        }
        out[x] = c * sum;
    }
    ScalarField result(grid, std::move(out));
    const double at_zero = spec.profile->value(std::vector<double>(static_cast<std::size_t>(p), 0.0));
    if (spec.n == 0) result = result + at_zero * principal_correction(grid, spec.nu, beta);
    if (spec.n == 1) result = result + at_zero * commutator_correction(grid, spec.nu, b[0], beta);
    return result;
}

ScalarField apply_D(const InterfaceGeometry& geom, const ScalarField& beta) {
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t x = 0; x < grid.size(); ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < grid.size(); ++y) {
            const auto o = offset(grid, x, y);
            if (!o) continue;
                const auto& xi = o->xi;
            const double jump = geom.f[x] - geom.f[y];
            double slope = 0.0;
            for (int d = 0; d < dim; ++d) slope += xi[d] * geom.grad_f[d][y];
            sum += o->factor * (jump - slope) / distance_power(norm(xi, dim), jump, dim) * beta[y];
        }
        out[x] = prefactor(grid) * sum;
    }
    return ScalarField(grid, std::move(out)) + corrections_D(geom, beta);
}

ScalarField apply_D_star(const InterfaceGeometry& geom, const ScalarField& beta) {
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t x = 0; x < grid.size(); ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < grid.size(); ++y) {
            const auto o = offset(grid, x, y);
            if (!o) continue;
                const auto& xi = o->xi;
            const double jump = geom.f[x] - geom.f[y];
            double slope = 0.0;
            for (int d = 0; d < dim; ++d) slope += xi[d] * geom.grad_f[d][x];
            sum += o->factor * (slope - jump) / distance_power(norm(xi, dim), jump, dim) * beta[y];
        }
        out[x] = prefactor(grid) * sum;
    }
    ScalarField result = ScalarField(grid, std::move(out)) - commutator_correction(grid, MultiIndex{}, geom.f, beta);
    for (int i = 0; i < dim; ++i)
        result = result + geom.grad_f[i] * principal_correction(grid, unit_index(i), beta);
    return result;
}

VectorField apply_A(const InterfaceGeometry& geom, const VectorField& b) {
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const auto& g = geom.grad_f;
    VectorField result;
    for (int k = 0; k < dim; ++k) {
        std::vector<double> out(grid.size(), 0.0);
        for (std::size_t x = 0; x < grid.size(); ++x) {
            double sum = 0.0;
            for (std::size_t y = 0; y < grid.size(); ++y) {
                const auto o = offset(grid, x, y);
                if (!o) continue;
                const auto& xi = o->xi;
                const double jump = geom.f[x] - geom.f[y];
                double slope = 0.0;
                double reach = 0.0;
                for (int d = 0; d < dim; ++d) {
                    slope += xi[d] * g[d][y];
                    reach += xi[d] * b[d][y];
                }
                sum += o->factor * ((jump - slope) * b[k][y] - reach * (g[k][x] - g[k][y])) /
                       distance_power(norm(xi, dim), jump, dim);
            }
            out[x] = prefactor(grid) * sum;
        }
        ScalarField comp = ScalarField(grid, std::move(out)) + commutator_correction(grid, MultiIndex{}, geom.f, b[k]);
        for (int i = 0; i < dim; ++i) {
            comp = comp + principal_correction(grid, unit_index(i), g[k] * b[i] - g[i] * b[k]);
            comp = comp - g[k] * principal_correction(grid, unit_index(i), b[i]);
        }
        result.push_back(std::move(comp));
    }
    return result;
}

ScalarField apply_AA(const InterfaceGeometry& geom, const VectorField& b) {
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const auto& g = geom.grad_f;
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t x = 0; x < grid.size(); ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < grid.size(); ++y) {
            const auto o = offset(grid, x, y);
            if (!o) continue;
                const auto& xi = o->xi;
            const double jump = geom.f[x] - geom.f[y];
            double slope = 0.0;
            double reach = 0.0;
            double tilt = 0.0;
            double bend = 0.0;
            for (int d = 0; d < dim; ++d) {
                slope += xi[d] * g[d][y];
                reach += xi[d] * b[d][y];
                tilt += g[d][x] * b[d][y];
                bend += g[d][x] * g[d][y];
            }
            sum += o->factor * ((slope - jump) * tilt - reach * (1.0 + bend)) / distance_power(norm(xi, dim), jump, dim);
        }
        out[x] = prefactor(grid) * sum;
    }
    ScalarField result(grid, std::move(out));
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k)
            result = result + g[k] * principal_correction(grid, unit_index(i), b[k] * g[i] - b[i] * g[k]);
        result = result - principal_correction(grid, unit_index(i), b[i]) -
                 g[i] * commutator_correction(grid, MultiIndex{}, geom.f, b[i]);
    }
    return result;
}

}  // namespace muskat::reference
