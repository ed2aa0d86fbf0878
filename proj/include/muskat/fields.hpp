// Velocity and pressure off the interface, and the one-sided trace check.
//
// For a probe z = (x, y) in R^{N+1}, with z_xi = (xi, f(xi)):
//   V_i(z) = 1/|S^N| int K_ij(z, xi) d_j beta(xi) dxi
//     K_ij = [(-(x - xi).grad f(xi) + y - f(xi)) delta_ij + (x_j - xi_j) d_i f(xi)] / |z - z_xi|^{N+1}, i <= N
//     K_{N+1,j} = -(x_j - xi_j) / |z - z_xi|^{N+1}
//   q(z) = -1/|S^N| int G(z, xi) beta(xi) dxi,
//     G = (-(x - xi).grad f(xi) + y - f(xi)) / |z - z_xi|^{N+1}.
// Sums run over the whole lattice with minimal-image x - xi.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "muskat/potentials.hpp"

namespace muskat {

enum class Side { above, below };

[[nodiscard]] std::string to_string(Side side);

struct ProbePoint {
    std::array<double, kMaxDim> x{};
    double y = 0.0;
};

struct FieldSample {
    std::array<double, kMaxDim + 1> velocity{};
    double pressure = 0.0;
    Side side = Side::above;
};

// Precomputed density data shared by every probe.
class FieldEvaluator {
public:
    FieldEvaluator(const InterfaceGeometry& geom, ScalarField beta);

    // Throws std::invalid_argument for probes closer than h/2 to the interface.
    [[nodiscard]] FieldSample evaluate(const ProbePoint& probe) const;
    [[nodiscard]] std::array<double, kMaxDim + 1> velocity(const ProbePoint& probe) const;
    [[nodiscard]] double pressure(const ProbePoint& probe) const;
    // Layer potential V_i(z) = 1/|S^N| int (z - z_xi)_i / |z - z_xi|^{N+1} beta dxi.
    [[nodiscard]] std::array<double, kMaxDim + 1> layer_potential(const ProbePoint& probe) const;

    // Side of the interface and distance estimate |y - f(x)| / sqrt(1 + |grad f(x)|^2).
    [[nodiscard]] Side side_of(const ProbePoint& probe, double* distance = nullptr) const;

private:
    void require_off_interface(const ProbePoint& probe) const;

    InterfaceGeometry geom_;
    ScalarField beta_;
    VectorField grad_beta_;
    std::vector<std::complex<double>> f_hat_;
    std::vector<std::vector<std::complex<double>>> grad_hat_;
};

[[nodiscard]] std::vector<FieldSample> eval_fields(const InterfaceGeometry& geom, const ScalarField& beta,
                                                   const std::vector<ProbePoint>& probes);

struct JumpLevel {
    double distance = 0.0;   // in units of h
    double deviation = 0.0;  // max over samples of |(V+ - V-) - jump|
    double relative = 0.0;   // deviation / max |jump|
};

struct JumpReport {
    std::vector<JumpLevel> levels;
    double jump_scale = 0.0;  // max |jump| over samples
    [[nodiscard]] bool decreasing() const;
};

// Evaluates V at (x, f(x)) +- d nu(x) for grid samples x and each d (in units
// of h), comparing V+ - V- with the closed-form jump
// (grad beta - (grad f . grad beta) grad f / omega, (grad f . grad beta) / omega).
[[nodiscard]] JumpReport jump_check(const InterfaceGeometry& geom, const ScalarField& beta,
                                    const std::vector<std::size_t>& samples,
                                    const std::vector<double>& distances = {8.0, 4.0, 2.0});

}  // namespace muskat
