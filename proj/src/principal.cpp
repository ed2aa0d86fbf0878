// Constant-coefficient parts of the n <= 1 kernels. Their lattice sums carry
// a singular-cell error and, for non-decaying data, a cell-truncation error
// that does not shrink with h; both go away when the lattice operator is
// swapped for the exact periodic multiplier.
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "muskat/kernels.hpp"
#include "muskat/spectral.hpp"
#include "muskat/sphere.hpp"

namespace muskat {
namespace {

// int_{S^{N-1}} g(w.z) w^nu dw on a rule split across the plane w.z = 0.
template <class Fn>
double sphere_moment(int dim, const MultiIndex& nu, const std::array<double, kMaxDim>& z, Fn g) {
    const SphereRule rule = make_sphere_rule(dim, std::span<const double>(z.data(), static_cast<std::size_t>(dim)));
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto& w = rule.nodes[q];
        double dot = 0.0;
        double mono = 1.0;
        for (int d = 0; d < dim; ++d) {
            dot += w[d] * z[d];
            for (int e = 0; e < nu[d]; ++e) mono *= w[d];
        }
        sum += rule.weights[q] * g(dot) * mono;
    }
    return sum;
}

// |nu| odd: i m(z), m = -(pi/2) / |S^N| int sgn(w.z) w^nu dw.
// |nu| even: -(pi/2) / |S^N| int |w.z| w^nu dw.
std::complex<double> exact_symbol(int dim, const MultiIndex& nu, const std::array<double, kMaxDim>& z) {
    double z2 = 0.0;
    for (int d = 0; d < dim; ++d) z2 += z[d] * z[d];
    if (z2 == 0.0) return 0.0;
    const int order = total_order(nu);
    const double scale = -0.5 * std::numbers::pi / unit_sphere_area(dim);
    if (order % 2 == 1) {
        if (order == 1) {
            for (int d = 0; d < dim; ++d) {
                if (nu[d] == 1) return {0.0, -0.5 * z[d] / std::sqrt(z2)};
            }
        }
        const double s = sphere_moment(dim, nu, z, [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); });
        return {0.0, scale * s};
    }
    if (order == 0) return -0.5 * std::sqrt(z2);
    return scale * sphere_moment(dim, nu, z, [](double t) { return std::abs(t); });
}

Spectrum build_table(const GridSpec& grid, const MultiIndex& nu) {
    const PVOffsets& offsets = offsets_for(grid);
    const bool odd = total_order(nu) % 2 == 1;
    Spectrum kernel(grid.size(), 0.0);
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        double angular = 1.0;
        for (int d = 0; d < grid.dim; ++d) {
            const double w = offsets.component(j, d) / offsets.radius(j);
            for (int e = 0; e < nu[d]; ++e) angular *= w;
        }
        if (!odd) angular /= offsets.radius(j);
        // The lattice sum is the circular convolution with this kernel.
        std::array<int, kMaxDim> slot{};
        for (int d = 0; d < grid.dim; ++d) slot[d] = (offsets.step(j, d) + grid.points) % grid.points;
        kernel[grid.ravel(slot)] = angular * offsets.weight(j);
    }
    const Spectrum lattice = forward_fft(grid, kernel);
    Spectrum table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const FrequencyIndex k = frequency_index(grid, i);
        // An odd symbol has no real action on a Nyquist bin.
        const bool drop = odd && touches_nyquist(grid, k);
        const std::complex<double> exact = drop ? 0.0 : exact_symbol(grid.dim, nu, physical_frequency(grid, k));
        table[i] = exact - lattice[i];
    }
    return table;
}

const Spectrum& correction_table(const GridSpec& grid, const MultiIndex& nu) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, double, MultiIndex>, Spectrum> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(grid.dim, grid.points, grid.extent, nu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_table(grid, nu)).first;
    return it->second;
}

}  // namespace

ScalarField principal_correction(const GridSpec& grid, const MultiIndex& nu, const ScalarField& beta) {
    if (!(beta.grid() == grid)) throw std::invalid_argument("principal_correction: grid mismatch");
    return apply_symbol_table(beta, correction_table(grid, nu));
}

ScalarField commutator_correction(const GridSpec& grid, const MultiIndex& nu, const ScalarField& b,
                                  const ScalarField& beta) {
    if (total_order(nu) % 2 != 0) throw std::invalid_argument("commutator_correction needs an even multi-index");
    require_same_grid(b, beta, "commutator_correction");
    return b * principal_correction(grid, nu, beta) - principal_correction(grid, nu, b * beta);
}

}  // namespace muskat
