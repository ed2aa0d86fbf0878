#include <cmath>
#include <stdexcept>

#include "lattice_loop.hpp"
#include "muskat/kernels.hpp"
#include "muskat/potentials.hpp"
#include "muskat/sphere.hpp"

namespace muskat {

InterfaceGeometry::InterfaceGeometry(ScalarField height) : f(std::move(height)) {
    const GridSpec& grid = f.grid();
    grad_f = gradient(f);
    std::vector<double> w(grid.size(), 1.0);
    for (const auto& g : grad_f) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += g[i] * g[i];
    }
    omega = ScalarField(grid, w);
    for (int d = 0; d <= grid.dim; ++d) {
        std::vector<double> c(grid.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double top = d < grid.dim ? -grad_f[d][i] : 1.0;
            c[i] = top / std::sqrt(w[i]);
        }
        normal.emplace_back(grid, std::move(c));
    }
}

namespace {

using detail::half_power;
using detail::lattice_sum;

double lattice_scale(const GridSpec& grid) { return grid.cell_volume() / unit_sphere_area(grid.dim); }

ScalarField scaled(const GridSpec& grid, std::vector<double> values, double scale) {
    for (double& v : values) v *= scale;
    return ScalarField(grid, std::move(values));
}

ScalarField correction(const GridSpec& grid, int axis, const ScalarField& g) {
    return principal_correction(grid, unit_index(axis), g);
}

// Linear part of B_{1,0}(f)[f, g].
ScalarField commutator(const ScalarField& f, const ScalarField& g) {
    return commutator_correction(f.grid(), MultiIndex{}, f, g);
}

// Composed-form building blocks with the base profile.
struct Blocks {
    const InterfaceGeometry& geom;
    OperatorSpec odd;                 // B_{1,0}
    std::vector<OperatorSpec> axial;  // B_{0,e_i}

    explicit Blocks(const InterfaceGeometry& g) : geom(g) {
        const int dim = g.grid().dim;
        const ProfilePtr phi = base_profile(dim);
        odd = OperatorSpec{phi, 1, MultiIndex{}};
        for (int i = 0; i < dim; ++i) axial.push_back(OperatorSpec{phi, 0, unit_index(i)});
    }
    ScalarField b10(const ScalarField& g) const { return apply_B(odd, {geom.f}, {geom.f}, g); }
    ScalarField b0(int i, const ScalarField& g) const { return apply_B(axial[i], {geom.f}, {}, g); }
};

void check_vector(const InterfaceGeometry& geom, const VectorField& b) {
    if (static_cast<int>(b.size()) != geom.grid().dim) throw std::invalid_argument("vector field has wrong dimension");
    for (const auto& c : b) require_same_grid(c, geom.f, "vector field");
}

}  // namespace

ScalarField apply_D(const InterfaceGeometry& geom, const ScalarField& beta, Form form) {
    require_same_grid(beta, geom.f, "apply_D");
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    if (form == Form::composed) {
        const Blocks blk(geom);
        ScalarField out = blk.b10(beta);
        for (int i = 0; i < dim; ++i) out = out - blk.b0(i, beta * geom.grad_f[i]);
        return out;
    }
    const PVOffsets& off = offsets_for(grid);
    const double* f = geom.f.data();
    const double* b = beta.data();
    std::array<const double*, kMaxDim> g{};
    for (int d = 0; d < dim; ++d) g[d] = geom.grad_f[d].data();
    auto sums = lattice_sum<1>(grid, [&](std::size_t x, std::size_t y, std::size_t j, std::array<double, 1>& acc) {
        const double df = f[x] - f[y];
        const double r = off.radius(j);
        double slope = 0.0;
        for (int d = 0; d < dim; ++d) slope += off.component(j, d) * g[d][y];
        acc[0] += off.factor(j) * (df - slope) / half_power(r * r + df * df, dim + 1) * b[y];
    });
    ScalarField out = scaled(grid, std::move(sums[0]), lattice_scale(grid)) + commutator(geom.f, beta);
    for (int i = 0; i < dim; ++i) out = out - correction(grid, i, beta * geom.grad_f[i]);
    return out;
}

ScalarField apply_D_star(const InterfaceGeometry& geom, const ScalarField& beta, Form form) {
    require_same_grid(beta, geom.f, "apply_D_star");
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    if (form == Form::composed) {
        const Blocks blk(geom);
        ScalarField out = -1.0 * blk.b10(beta);
        for (int i = 0; i < dim; ++i) out = out + geom.grad_f[i] * blk.b0(i, beta);
        return out;
    }
    const PVOffsets& off = offsets_for(grid);
    const double* f = geom.f.data();
    const double* b = beta.data();
    std::array<const double*, kMaxDim> g{};
    for (int d = 0; d < dim; ++d) g[d] = geom.grad_f[d].data();
    auto sums = lattice_sum<1>(grid, [&](std::size_t x, std::size_t y, std::size_t j, std::array<double, 1>& acc) {
        const double df = f[x] - f[y];
        const double r = off.radius(j);
        double slope = 0.0;
        for (int d = 0; d < dim; ++d) slope += off.component(j, d) * g[d][x];
        acc[0] += off.factor(j) * (slope - df) / half_power(r * r + df * df, dim + 1) * b[y];
    });
    ScalarField out = scaled(grid, std::move(sums[0]), lattice_scale(grid)) - commutator(geom.f, beta);
    for (int i = 0; i < dim; ++i) out = out + geom.grad_f[i] * correction(grid, i, beta);
    return out;
}

VectorField apply_A(const InterfaceGeometry& geom, const VectorField& bvec, Form form) {
    check_vector(geom, bvec);
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const VectorField& df_ = geom.grad_f;
    VectorField result;
    if (form == Form::composed) {
        const Blocks blk(geom);
        for (int k = 0; k < dim; ++k) {
            ScalarField out = blk.b10(bvec[k]);
            for (int i = 0; i < dim; ++i) {
                out = out + blk.b0(i, df_[k] * bvec[i] - df_[i] * bvec[k]);
                out = out - df_[k] * blk.b0(i, bvec[i]);
            }
            result.push_back(std::move(out));
        }
        return result;
    }
    const PVOffsets& off = offsets_for(grid);
    const double* f = geom.f.data();
    std::array<const double*, kMaxDim> g{};
    std::array<const double*, kMaxDim> b{};
    for (int d = 0; d < dim; ++d) {
        g[d] = df_[d].data();
        b[d] = bvec[d].data();
    }
    auto sums = lattice_sum<kMaxDim>(grid, [&](std::size_t x, std::size_t y, std::size_t j,
                                               std::array<double, kMaxDim>& acc) {
        const double jump = f[x] - f[y];
        const double r = off.radius(j);
        double slope = 0.0;
        double reach = 0.0;
        for (int d = 0; d < dim; ++d) {
            slope += off.component(j, d) * g[d][y];
            reach += off.component(j, d) * b[d][y];
        }
        const double inv = off.factor(j) / half_power(r * r + jump * jump, dim + 1);
        for (int k = 0; k < dim; ++k)
            acc[k] += ((jump - slope) * b[k][y] - reach * (g[k][x] - g[k][y])) * inv;
    });
    for (int k = 0; k < dim; ++k) {
        ScalarField out = scaled(grid, std::move(sums[k]), lattice_scale(grid)) + commutator(geom.f, bvec[k]);
        for (int i = 0; i < dim; ++i) {
            out = out + correction(grid, i, df_[k] * bvec[i] - df_[i] * bvec[k]);
            out = out - df_[k] * correction(grid, i, bvec[i]);
        }
        result.push_back(std::move(out));
    }
    return result;
}

ScalarField apply_AA(const InterfaceGeometry& geom, const VectorField& bvec, Form form) {
    check_vector(geom, bvec);
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const VectorField& df_ = geom.grad_f;
    if (form == Form::composed) {
        const Blocks blk(geom);
        ScalarField out(grid);
        for (int i = 0; i < dim; ++i) {
            for (int k = 0; k < dim; ++k)
                out = out + df_[k] * blk.b0(i, bvec[k] * df_[i] - bvec[i] * df_[k]);
            out = out - blk.b0(i, bvec[i]) - df_[i] * blk.b10(bvec[i]);
        }
        return out;
    }
    const PVOffsets& off = offsets_for(grid);
    const double* f = geom.f.data();
    std::array<const double*, kMaxDim> g{};
    std::array<const double*, kMaxDim> b{};
    for (int d = 0; d < dim; ++d) {
        g[d] = df_[d].data();
        b[d] = bvec[d].data();
    }
    auto sums = lattice_sum<1>(grid, [&](std::size_t x, std::size_t y, std::size_t j, std::array<double, 1>& acc) {
        const double jump = f[x] - f[y];
        const double r = off.radius(j);
        double slope = 0.0;
        double reach = 0.0;
        double tilt = 0.0;
        double bend = 0.0;
        for (int d = 0; d < dim; ++d) {
            slope += off.component(j, d) * g[d][y];
            reach += off.component(j, d) * b[d][y];
            tilt += g[d][x] * b[d][y];
            bend += g[d][x] * g[d][y];
        }
        acc[0] += off.factor(j) * ((slope - jump) * tilt - reach * (1.0 + bend)) /
                  half_power(r * r + jump * jump, dim + 1);
    });
    ScalarField out = scaled(grid, std::move(sums[0]), lattice_scale(grid));
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k) out = out + df_[k] * correction(grid, i, bvec[k] * df_[i] - bvec[i] * df_[k]);
        out = out - correction(grid, i, bvec[i]) - df_[i] * commutator(geom.f, bvec[i]);
    }
    return out;
}

double gradient_identity_residual(const InterfaceGeometry& geom, const ScalarField& beta) {
    const VectorField lhs = gradient(apply_D(geom, beta));
    const VectorField rhs = apply_A(geom, gradient(beta));
    VectorField diff;
    for (std::size_t k = 0; k < lhs.size(); ++k) diff.push_back(lhs[k] - rhs[k]);
    return l2_norm(diff);
}

VectorField layer_gradient_trace(const InterfaceGeometry& geom, const ScalarField& beta) {
    const Blocks blk(geom);
    VectorField pv;
    for (int i = 0; i < geom.grid().dim; ++i) pv.push_back(blk.b0(i, beta));
    pv.push_back(blk.b10(beta));
    return pv;
}

double rellich_residual(const InterfaceGeometry& geom, const ScalarField& beta, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("rellich sign must be +1 or -1");
    const GridSpec& grid = geom.grid();
    const int dim = grid.dim;
    const VectorField pv = layer_gradient_trace(geom, beta);
    const ScalarField side = static_cast<double>(sign) * beta - 2.0 * apply_D_star(geom, beta);
    std::vector<double> integrand(grid.size());
    for (std::size_t x = 0; x < grid.size(); ++x) {
        double normal_part = 0.0;
        for (int d = 0; d <= dim; ++d) normal_part += pv[d][x] * geom.normal[d][x];
        double tangent2 = 0.0;
        double tangent_top = 0.0;
        for (int d = 0; d <= dim; ++d) {
            const double t = pv[d][x] - normal_part * geom.normal[d][x];
            tangent2 += t * t;
            if (d == dim) tangent_top = t;
        }
        const double g = side[x];
        integrand[x] = g * g / (4.0 * geom.omega[x]) + g * tangent_top - tangent2;
    }
    const double total = integrate(ScalarField(grid, std::move(integrand)));
    const double mass = integrate(beta);
    return std::abs(total - mass * mass / (4.0 * std::pow(grid.extent, dim)));
}

}  // namespace muskat
