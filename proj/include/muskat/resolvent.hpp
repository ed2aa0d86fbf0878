// Density equation beta + 2 a_mu D(f) beta = f and resolvent probes.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "muskat/potentials.hpp"

namespace muskat {

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;  // ||A beta - rhs|| / ||rhs||, recomputed after the solve
    double seconds = 0.0;
    double probe = std::numeric_limits<double>::quiet_NaN();  // optional conditioning probe

    [[nodiscard]] static std::string csv_header();
    [[nodiscard]] std::string csv_row(const std::string& run_id) const;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 500;
    int restart = 30;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(report) {}
    [[nodiscard]] const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

using LinearMap = std::function<ScalarField(const ScalarField&)>;

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
// Stops when ||r|| <= tol ||rhs||; throws SolverError otherwise.
[[nodiscard]] ScalarField gmres(const LinearMap& op, const ScalarField& rhs, const ScalarField& guess,
                                const SolveOptions& options, SolveReport& report);

struct DensitySolution {
    ScalarField beta;
    SolveReport report;
};

// |a_mu| < 1 required. `warm` (optional) seeds the Krylov solve.
[[nodiscard]] DensitySolution solve_beta(const InterfaceGeometry& geom, double a_mu, const SolveOptions& options = {},
                                         const ScalarField* warm = nullptr);

// min over `trials` random smooth unit beta of ||(1 - a D(f)) beta||. Probes
// are band-limited in physical frequency and drawn from `seed`, so the same
// probes appear at every resolution of the same cell.
[[nodiscard]] double probe_resolvent_bound(const InterfaceGeometry& geom, double a, int trials = 16,
                                           std::uint64_t seed = 1);

// Random smooth field with unit discrete L2 norm; shared by the probe and tests.
[[nodiscard]] ScalarField random_smooth_field(const GridSpec& grid, std::uint64_t seed, int band = 4);

}  // namespace muskat
