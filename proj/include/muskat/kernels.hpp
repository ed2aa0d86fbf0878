// Generalised Riesz transforms evaluated as principal-value lattice sums.
//
//   B(a)[b, beta](x) = 1/|S^N| sum_{xi != 0} phi((D a)^2) prod_i D b_i
//                      * xi^nu / |xi|^{|nu|} * beta(x - xi) / |xi|^N * h^N
//
// with D u = (u(x) - u(x - xi)) / |xi| on minimal-image offsets.
#pragma once

#include <array>
#include <vector>

#include "muskat/grid.hpp"
#include "muskat/profiles.hpp"

namespace muskat {

using MultiIndex = std::array<int, kMaxDim>;

[[nodiscard]] int total_order(const MultiIndex& nu);
[[nodiscard]] MultiIndex unit_index(int axis);

struct OperatorSpec {
    ProfilePtr profile;
    int n = 0;      // number of difference-quotient slots b_1..b_n
    MultiIndex nu{};  // angular multi-index

    // Throws unless n + |nu| is odd, n >= 0 and nu lives in `dim` axes.
    void validate(int dim) const;
};

// Symmetric punctured offset set: every integer offset with |m_d| < points/2,
// except 0. Stored lexicographically, which fixes the per-point summation order.
//
// The weights combine the punctured rule at spacing h with the one at 2h
// (2 R_h - R_2h): offsets with every m_d even carry 2 - 2^N, the rest 2.
// The punctured error expands in odd powers of h, so this removes the O(h)
// term at no extra cost.
class PVOffsets {
public:
    explicit PVOffsets(const GridSpec& grid);

    [[nodiscard]] std::size_t size() const { return radius_.size(); }
    [[nodiscard]] int step(std::size_t j, int axis) const { return steps_[axis][j]; }
    [[nodiscard]] double component(std::size_t j, int axis) const { return xi_[axis][j]; }
    [[nodiscard]] double radius(std::size_t j) const { return radius_[j]; }
    // Extrapolation factor of offset j (2 or 2 - 2^N).
    [[nodiscard]] double factor(std::size_t j) const { return factor_[j]; }
    // factor * h^N / (|S^N| |xi|^N): the common lattice weight of every kernel.
    [[nodiscard]] double weight(std::size_t j) const { return weight_[j]; }
    [[nodiscard]] const GridSpec& grid() const { return grid_; }

    // Linear index of (x - xi) for output point x with unravelled index `at`.
    [[nodiscard]] std::size_t source(const std::array<int, kMaxDim>& at, std::size_t j) const {
        std::size_t linear = 0;
        for (int d = 0; d < grid_.dim; ++d) {
            int y = at[d] - steps_[d][j];
            if (y < 0) y += grid_.points;
            else if (y >= grid_.points) y -= grid_.points;
            linear = linear * grid_.points + static_cast<std::size_t>(y);
        }
        return linear;
    }

private:
    GridSpec grid_;
    std::array<std::vector<int>, kMaxDim> steps_;
    std::array<std::vector<double>, kMaxDim> xi_;
    std::vector<double> radius_;
    std::vector<double> factor_;
    std::vector<double> weight_;
};

// Extrapolation factor for an integer offset m (see PVOffsets).
[[nodiscard]] double extrapolation_factor(const std::array<int, kMaxDim>& m, int dim);

// Shared, immutable offset tables keyed by grid.
[[nodiscard]] const PVOffsets& offsets_for(const GridSpec& grid);

// a: profile-arity fields; b: spec.n fields.
[[nodiscard]] ScalarField apply_B(const OperatorSpec& spec, const std::vector<ScalarField>& a,
                                  const std::vector<ScalarField>& b, const ScalarField& beta);

// Exact multiplier minus lattice operator for the constant-coefficient kernel
// w^nu / |xi|^{N + 1 - parity(|nu|)}, applied to beta.
//   |nu| odd:  kernel w^nu/|xi|^N, exact symbol i m(z) (Riesz type);
//   |nu| even: kernel w^nu/|xi|^{N+1}, exact symbol
//              -(pi / (2 |S^N|)) int |w.z| w^nu dw, defined up to a constant
//              that cancels in the commutator below.
// apply_B adds phi(0) times the correction when n == 0, and
// phi(0) (b C[beta] - C[b beta]) when n == 1, so the part of every kernel that
// is linear in the data acts as the exact periodic operator.
[[nodiscard]] ScalarField principal_correction(const GridSpec& grid, const MultiIndex& nu, const ScalarField& beta);

// b C[beta] - C[b beta] with the even correction C for nu.
[[nodiscard]] ScalarField commutator_correction(const GridSpec& grid, const MultiIndex& nu, const ScalarField& b,
                                                const ScalarField& beta);

// Largest (over axes j) discrete L2 norm of
//   d_j B(a)[b, beta] - ( B[b, d_j beta] + sum_i B[.., d_j b_i, .., beta]
//                         + 2 B^{phi'}_{n+2}(a)[d_j a, a, b, beta] ).
// Needs a single-argument profile with a closed-form derivative.
[[nodiscard]] double chain_rule_residual(const OperatorSpec& spec, const ScalarField& a,
                                         const std::vector<ScalarField>& b, const ScalarField& beta);

}  // namespace muskat
