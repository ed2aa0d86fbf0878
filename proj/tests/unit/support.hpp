// Shared generators and comparisons for the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "muskat/grid.hpp"

namespace testing {

using muskat::GridSpec;
using muskat::ScalarField;

// Seeded generator for test data; every property test draws from one of these.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

    std::vector<double> vector(int dim, double lo, double hi) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    // Unit vector in R^dim.
    std::vector<double> direction(int dim) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        double n = 0.0;
        do {
            n = 0.0;
            for (auto& x : v) {
                x = normal();
                n += x * x;
            }
        } while (n < 1e-6);
        for (auto& x : v) x /= std::sqrt(n);
        return v;
    }

    // Sum of random cosines/sines with integer waves |k_d| <= band.
    ScalarField band_limited(const GridSpec& grid, int band, double amplitude = 1.0) {
        std::vector<double> values(grid.size(), 0.0);
        const double unit = 2.0 * std::numbers::pi / grid.extent;
        const int terms = 6;
        for (int t = 0; t < terms; ++t) {
            std::array<int, muskat::kMaxDim> k{};
            for (int d = 0; d < grid.dim; ++d) k[d] = integer(-band, band);
            const double c = normal() * amplitude / terms;
            const double s = normal() * amplitude / terms;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const auto x = grid.position(i);
                double phase = 0.0;
                for (int d = 0; d < grid.dim; ++d) phase += unit * k[d] * x[d];
                values[i] += c * std::cos(phase) + s * std::sin(phase);
            }
        }
        return ScalarField(grid, std::move(values));
    }

    // Random Gaussian bump with centre within `spread` of the origin.
    ScalarField bump(const GridSpec& grid, double amplitude, double width, double spread = 0.5) {
        std::vector<double> centre = vector(grid.dim, -spread, spread);
        return gaussian(grid, amplitude, width, centre);
    }

    static ScalarField gaussian(const GridSpec& grid, double amplitude, double width, const std::vector<double>& centre) {
        std::vector<double> values(grid.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto x = grid.position(i);
            double r2 = 0.0;
            for (int d = 0; d < grid.dim; ++d) r2 += (x[d] - centre[d]) * (x[d] - centre[d]);
            values[i] = amplitude * std::exp(-r2 / (2.0 * width * width));
        }
        return ScalarField(grid, std::move(values));
    }

private:
    std::mt19937_64 rng_;
};

inline double rel_diff(const ScalarField& a, const ScalarField& b) {
    const double scale = std::max(muskat::l2_norm(b), 1e-300);
    return muskat::l2_norm(a - b) / scale;
}

inline double rel_diff(const muskat::VectorField& a, const muskat::VectorField& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double d = muskat::l2_norm(a[c] - b[c]);
        const double n = muskat::l2_norm(b[c]);
        num += d * d;
        den += n * n;
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

inline bool bit_equal(const ScalarField& a, const ScalarField& b) {
    return a.grid() == b.grid() && std::equal(a.values().begin(), a.values().end(), b.values().begin());
}

// Field from a function of position.
template <class Fn>
ScalarField sample(const GridSpec& grid, Fn fn) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid.position(i));
    return ScalarField(grid, std::move(values));
}

}  // namespace testing
