// Layer potentials of the interface graph {(x, f(x))}: the double layer D,
// its adjoint D*, the tangential operator A and the velocity operator AA.
//
// Every operator has a direct form (one fused lattice sum of the closed-form
// kernel) and a composed form built from apply_B with the base profile. The
// two agree to rounding; the composed forms exist to cross-check.
#pragma once

#include "muskat/grid.hpp"

namespace muskat {

struct InterfaceGeometry {
    ScalarField f;
    VectorField grad_f;  // spectral
    ScalarField omega;   // 1 + |grad f|^2
    VectorField normal;  // (-grad f, 1) / sqrt(omega), dim + 1 components

    explicit InterfaceGeometry(ScalarField height);
    [[nodiscard]] const GridSpec& grid() const { return f.grid(); }
};

enum class Form { direct, composed };

[[nodiscard]] ScalarField apply_D(const InterfaceGeometry& geom, const ScalarField& beta, Form form = Form::direct);
[[nodiscard]] ScalarField apply_D_star(const InterfaceGeometry& geom, const ScalarField& beta,
                                       Form form = Form::direct);
// Tangential operator acting on a dim-vector field; returns dim components.
[[nodiscard]] VectorField apply_A(const InterfaceGeometry& geom, const VectorField& b, Form form = Form::direct);
// Velocity operator; Phi~(f) = AA(f)[grad beta].
[[nodiscard]] ScalarField apply_AA(const InterfaceGeometry& geom, const VectorField& b, Form form = Form::direct);

// || grad(D beta) - A[grad beta] || over all components.
[[nodiscard]] double gradient_identity_residual(const InterfaceGeometry& geom, const ScalarField& beta);

// Trace of the gradient of the layer potential with density beta: the
// principal-value part, dim + 1 components. The last component is
// B_{1,0}(f)[f, beta], the others B_{0,e_i}(f)[beta].
[[nodiscard]] VectorField layer_gradient_trace(const InterfaceGeometry& geom, const ScalarField& beta);

// |int R_sign dx - (int beta)^2 / (4 L^N)| where R_sign is the Rellich
// integrand for the side `sign` (+1 above, -1 below). The subtracted term is
// the flux of the uniform far field through the faces of the periodic cell.
[[nodiscard]] double rellich_residual(const InterfaceGeometry& geom, const ScalarField& beta, int sign);

}  // namespace muskat
