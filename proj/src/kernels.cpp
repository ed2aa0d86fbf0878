#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "muskat/kernels.hpp"
#include "muskat/sphere.hpp"

namespace muskat {

int total_order(const MultiIndex& nu) { return nu[0] + nu[1] + nu[2]; }

MultiIndex unit_index(int axis) {
    MultiIndex e{};
    e.at(static_cast<std::size_t>(axis)) = 1;
    return e;
}

void OperatorSpec::validate(int dim) const {
    if (!profile) throw std::invalid_argument("operator spec has no profile");
    if (n < 0) throw std::invalid_argument("operator spec needs n >= 0");
    for (int d = 0; d < kMaxDim; ++d) {
        if (nu[d] < 0) throw std::invalid_argument("multi-index entries must be non-negative");
        if (d >= dim && nu[d] != 0) throw std::invalid_argument("multi-index uses an axis beyond the grid dimension");
    }
    if ((n + total_order(nu)) % 2 == 0)
        throw std::invalid_argument("n + |nu| must be odd for a principal-value kernel");
}

double extrapolation_factor(const std::array<int, kMaxDim>& m, int dim) {
    bool coarse = true;
    for (int d = 0; d < dim; ++d) coarse = coarse && m[d] % 2 == 0;
    return coarse ? 2.0 - std::ldexp(1.0, dim) : 2.0;
}

PVOffsets::PVOffsets(const GridSpec& grid) : grid_(grid) {
    const int reach = (grid.points - 1) / 2;
    const int width = 2 * reach + 1;
    std::size_t total = 1;
    for (int d = 0; d < grid.dim; ++d) total *= static_cast<std::size_t>(width);
    const double h = grid.spacing();
    const double scale = grid.cell_volume() / unit_sphere_area(grid.dim);
    for (int d = 0; d < grid.dim; ++d) {
        steps_[d].reserve(total - 1);
        xi_[d].reserve(total - 1);
    }
    for (std::size_t t = 0; t < total; ++t) {
        std::array<int, kMaxDim> m{};
        std::size_t rest = t;
        bool origin = true;
        for (int d = grid.dim - 1; d >= 0; --d) {
            m[d] = static_cast<int>(rest % static_cast<std::size_t>(width)) - reach;
            rest /= static_cast<std::size_t>(width);
            origin = origin && m[d] == 0;
        }
        if (origin) continue;
        double r2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            steps_[d].push_back(m[d]);
            xi_[d].push_back(m[d] * h);
            r2 += (m[d] * h) * (m[d] * h);
        }
        const double r = std::sqrt(r2);
        radius_.push_back(r);
        factor_.push_back(extrapolation_factor(m, grid.dim));
        weight_.push_back(factor_.back() * scale / std::pow(r, grid.dim));
    }
}

const PVOffsets& offsets_for(const GridSpec& grid) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double>, std::unique_ptr<PVOffsets>> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(grid.dim, grid.points, grid.extent);
    auto& slot = cache[key];
    if (!slot) slot = std::make_unique<PVOffsets>(grid);
    return *slot;
}

ScalarField apply_B(const OperatorSpec& spec, const std::vector<ScalarField>& a, const std::vector<ScalarField>& b,
                    const ScalarField& beta) {
    const GridSpec& grid = beta.grid();
    spec.validate(grid.dim);
    const SmoothProfile& profile = *spec.profile;
    const int p = profile.arity();
    if (static_cast<int>(a.size()) != p) throw std::invalid_argument("apply_B: profile arity does not match a");
    if (static_cast<int>(b.size()) != spec.n) throw std::invalid_argument("apply_B: n does not match b");
    for (const auto& f : a) require_same_grid(f, beta, "apply_B a");
    for (const auto& f : b) require_same_grid(f, beta, "apply_B b");

    // Slots in a canonical order so that permuting b leaves the rounding, and
    // hence the output, unchanged.
    std::vector<const double*> slots;
    for (const auto& f : b) slots.push_back(f.data());
    std::sort(slots.begin(), slots.end(), [n = beta.size()](const double* x, const double* y) {
        return std::lexicographical_compare(x, x + n, y, y + n);
    });

    const PVOffsets& offsets = offsets_for(grid);
    const std::size_t count = offsets.size();

    std::vector<double> weight(count);
    for (std::size_t j = 0; j < count; ++j) {
        double angular = 1.0;
        for (int d = 0; d < grid.dim; ++d) {
            const double w = offsets.component(j, d) / offsets.radius(j);
            for (int e = 0; e < spec.nu[d]; ++e) angular *= w;
        }
        weight[j] = angular * offsets.weight(j);
    }

    const auto npoints = static_cast<long long>(grid.size());
    std::vector<double> out(grid.size());
    const double* src_beta = beta.data();

#pragma omp parallel
    {
        std::vector<std::size_t> source(count);
        std::vector<double> args(static_cast<std::size_t>(p) * count);
        std::vector<double> phi(count);
#pragma omp for schedule(static)
        for (long long i = 0; i < npoints; ++i) {
            const auto at = grid.unravel(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < count; ++j) source[j] = offsets.source(at, j);
            for (int q = 0; q < p; ++q) {
                const double* field = a[q].data();
                const double here = field[i];
                double* slot = args.data() + static_cast<std::size_t>(q) * count;
                for (std::size_t j = 0; j < count; ++j) {
                    const double quotient = (here - field[source[j]]) / offsets.radius(j);
                    slot[j] = quotient * quotient;
                }
            }
            profile.evaluate(args, count, phi);
            double sum = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                double term = phi[j] * weight[j];
                for (const double* field : slots) {
                    term *= (field[i] - field[source[j]]) / offsets.radius(j);
                }
                sum += term * src_beta[source[j]];
            }
            out[static_cast<std::size_t>(i)] = sum;
        }
    }

    ScalarField result(grid, std::move(out));
    if (spec.n <= 1) {
        const std::vector<double> origin(static_cast<std::size_t>(p), 0.0);
        const double at_zero = profile.value(origin);
        if (at_zero != 0.0) {
            const ScalarField fix = spec.n == 0 ? principal_correction(grid, spec.nu, beta)
                                                : commutator_correction(grid, spec.nu, b[0], beta);
            result = result + at_zero * fix;
        }
    }
    return result;
}

double chain_rule_residual(const OperatorSpec& spec, const ScalarField& a, const std::vector<ScalarField>& b,
                           const ScalarField& beta) {
    const GridSpec& grid = beta.grid();
    if (spec.profile->arity() != 1) throw std::invalid_argument("chain rule check needs a single-argument profile");
    const ProfilePtr slope = spec.profile->derivative(0);
    if (!slope) throw std::invalid_argument("chain rule check needs a closed-form profile derivative");
    const OperatorSpec outer{slope, spec.n + 2, spec.nu};
    const std::vector<ScalarField> args{a};
    const ScalarField base = apply_B(spec, args, b, beta);

    double worst = 0.0;
    for (int j = 0; j < grid.dim; ++j) {
        ScalarField rhs = apply_B(spec, args, b, spectral_derivative(beta, j));
        for (int i = 0; i < spec.n; ++i) {
            std::vector<ScalarField> varied = b;
            varied[i] = spectral_derivative(b[i], j);
            rhs = rhs + apply_B(spec, args, varied, beta);
        }
        std::vector<ScalarField> slots{spectral_derivative(a, j), a};
        slots.insert(slots.end(), b.begin(), b.end());
        rhs = rhs + 2.0 * apply_B(outer, args, slots, beta);
        worst = std::max(worst, l2_norm(spectral_derivative(base, j) - rhs));
    }
    return worst;
}

}  // namespace muskat
