// Parallel driver for fused principal-value lattice sums over output points.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "muskat/kernels.hpp"

namespace muskat::detail {

// body(x, y, j, acc) adds the contribution of offset j (source y) to the
// `Outputs` accumulators of output point x. Offsets are visited in their
// stored order, so every output is independent of the thread count.
template <int Outputs, class Body>
std::array<std::vector<double>, Outputs> lattice_sum(const GridSpec& grid, Body body) {
    const PVOffsets& offsets = offsets_for(grid);
    const std::size_t count = offsets.size();
    std::array<std::vector<double>, Outputs> out;
    for (auto& o : out) o.assign(grid.size(), 0.0);
    const auto npoints = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < npoints; ++i) {
        const auto x = static_cast<std::size_t>(i);
        const auto at = grid.unravel(x);
        std::array<double, Outputs> acc{};
        for (std::size_t j = 0; j < count; ++j) body(x, offsets.source(at, j), j, acc);
        for (int c = 0; c < Outputs; ++c) out[c][x] = acc[c];
    }
    return out;
}

// s^(k/2) for the small integer k used by the Muskat kernels.
inline double half_power(double s, int k) {
    double r = 1.0;
    for (int e = 0; e < k / 2; ++e) r *= s;
    if (k % 2 == 1) r *= std::sqrt(s);
    return r;
}

}  // namespace muskat::detail
