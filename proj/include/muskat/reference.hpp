// Serial dense double-loop versions of the lattice operators. They walk
// source points rather than an offset table, recompute minimal images from
// indices and never thread, so they make an independent oracle for the
// parallel kernels in tests and the benchmark.
#pragma once

#include "muskat/kernels.hpp"
#include "muskat/potentials.hpp"

namespace muskat::reference {

[[nodiscard]] ScalarField apply_B(const OperatorSpec& spec, const std::vector<ScalarField>& a,
                                  const std::vector<ScalarField>& b, const ScalarField& beta);
[[nodiscard]] ScalarField apply_D(const InterfaceGeometry& geom, const ScalarField& beta);
[[nodiscard]] ScalarField apply_D_star(const InterfaceGeometry& geom, const ScalarField& beta);
[[nodiscard]] VectorField apply_A(const InterfaceGeometry& geom, const VectorField& b);
[[nodiscard]] ScalarField apply_AA(const InterfaceGeometry& geom, const VectorField& b);

}  // namespace muskat::reference
