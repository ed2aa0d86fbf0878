// Contour dynamics df/dt = Lambda * Phi~(f), Phi~(f) = AA(f)[grad beta].
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/resolvent.hpp"

namespace muskat {

struct PhysicalParams {
    double Lambda = 1.0;
    double a_mu = 0.0;

    // Lambda = 2 k g (rho_minus - rho_plus) / (mu_plus + mu_minus),
    // a_mu = (mu_plus - mu_minus) / (mu_plus + mu_minus).
    [[nodiscard]] static PhysicalParams from_raw(double permeability, double gravity, double rho_plus,
                                                 double rho_minus, double mu_plus, double mu_minus);
    void validate() const;
};

struct PhiTilde {
    ScalarField beta;
    ScalarField value;
    SolveReport report;
};

// Lambda-free velocity of the interface; Phi = Lambda * Phi~.
[[nodiscard]] PhiTilde compute_phi_tilde(const ScalarField& f, double a_mu, const SolveOptions& options = {},
                                         const ScalarField* warm = nullptr);

struct RtMargin {
    ScalarField field;  // 1 - 2 a_mu Phi~
    double min = 0.0;
    double max = 0.0;
    bool holds = false;  // Lambda * field > 0 everywhere

    // Margin measured in the stable orientation: sign(Lambda) * field, minimised.
    [[nodiscard]] double signed_min(double Lambda) const { return Lambda > 0.0 ? min : -max; }
};

[[nodiscard]] RtMargin rt_margin(const ScalarField& phi_tilde, double a_mu, double Lambda);

// || (1 - 2 a_mu Phi~) - ( -grad f . grad beta
//                          + omega (1 + 2 a_mu sum_k B_{0,e_k}(f)[d_k beta]) ) ||
[[nodiscard]] double wow_residual(const InterfaceGeometry& geom, const ScalarField& beta, const ScalarField& phi_tilde,
                                  double a_mu);

struct InterfaceState {
    ScalarField f;
    ScalarField beta;
    ScalarField phi_tilde;
    RtMargin margin;
    double t = 0.0;
    int beta_iterations = 0;
};

enum class Scheme { ssp_rk2, euler };

struct StepperConfig {
    Scheme scheme = Scheme::ssp_rk2;
    std::optional<double> dt;  // empty: dt = cfl * h / |Lambda|
    double cfl = 0.5;
    double rt_floor = 0.05;
    bool override_rt = false;
    SolveOptions solver;

    [[nodiscard]] double resolve_dt(const GridSpec& grid, const PhysicalParams& params) const;
};

class RtBreach : public std::runtime_error {
public:
    RtBreach(const std::string& what, double margin) : std::runtime_error(what), margin_(margin) {}
    [[nodiscard]] double margin() const { return margin_; }

private:
    double margin_;
};

[[nodiscard]] InterfaceState make_state(ScalarField f, const PhysicalParams& params, const SolveOptions& solver,
                                        double t = 0.0, const ScalarField* warm = nullptr);

// One step; throws RtBreach before stepping when the signed margin is below
// the floor, unless the config overrides the check.
[[nodiscard]] InterfaceState step(const InterfaceState& state, const PhysicalParams& params,
                                  const StepperConfig& config, double dt);

struct TimeSeriesRow {
    double t = 0.0;
    double min_rt_margin = 0.0;
    double volume = 0.0;
    double sobolev = 0.0;
    int beta_iters = 0;
    double dt = 0.0;
};

struct EvolveOptions {
    double t_end = 1.0;
    int snapshot_stride = 1;
    double sobolev_s = 2.0;
};

enum class EvolveStatus { completed, rt_halt };

struct EvolveResult {
    EvolveStatus status = EvolveStatus::completed;
    InterfaceState final_state;
    std::vector<TimeSeriesRow> series;
    int steps = 0;
    std::string halt_reason;
};

// Called with (step index, state) for step 0, every stride-th step, and the
// final state (also on an RT halt).
using SnapshotSink = std::function<void(int, const InterfaceState&)>;

[[nodiscard]] EvolveResult evolve(const ScalarField& f0, const PhysicalParams& params, const StepperConfig& config,
                                  const EvolveOptions& options, const SnapshotSink& sink = {});

[[nodiscard]] std::string time_series_header();
[[nodiscard]] std::string time_series_row(const TimeSeriesRow& row);

}  // namespace muskat
