#include <algorithm>
#include <cmath>
#include <sstream>

#include "muskat/dynamics.hpp"
#include "muskat/kernels.hpp"

namespace muskat {

PhysicalParams PhysicalParams::from_raw(double permeability, double gravity, double rho_plus, double rho_minus,
                                        double mu_plus, double mu_minus) {
    if (!(mu_plus > 0.0) || !(mu_minus > 0.0)) throw std::invalid_argument("viscosities must be positive");
    if (!(permeability > 0.0)) throw std::invalid_argument("permeability must be positive");
    PhysicalParams p;
    p.Lambda = 2.0 * permeability * gravity * (rho_minus - rho_plus) / (mu_plus + mu_minus);
    p.a_mu = (mu_plus - mu_minus) / (mu_plus + mu_minus);
    p.validate();
    return p;
}

void PhysicalParams::validate() const {
    if (!std::isfinite(Lambda)) throw std::invalid_argument("Lambda must be finite");
    if (!(std::abs(a_mu) < 1.0)) throw std::invalid_argument("a_mu must lie in (-1, 1)");
}

PhiTilde compute_phi_tilde(const ScalarField& f, double a_mu, const SolveOptions& options, const ScalarField* warm) {
    const InterfaceGeometry geom(f);
    DensitySolution sol = solve_beta(geom, a_mu, options, warm);
    ScalarField value = apply_AA(geom, gradient(sol.beta));
    return PhiTilde{std::move(sol.beta), std::move(value), sol.report};
}

RtMargin rt_margin(const ScalarField& phi_tilde, double a_mu, double Lambda) {
    RtMargin m;
    m.field = constant_field(phi_tilde.grid(), 1.0) - (2.0 * a_mu) * phi_tilde;
    const auto v = m.field.values();
    m.min = *std::min_element(v.begin(), v.end());
    m.max = *std::max_element(v.begin(), v.end());
    m.holds = (Lambda > 0.0 && m.min > 0.0) || (Lambda < 0.0 && m.max < 0.0);
    return m;
}

double wow_residual(const InterfaceGeometry& geom, const ScalarField& beta, const ScalarField& phi_tilde,
                    double a_mu) {
    const GridSpec& grid = geom.grid();
    const VectorField grad_beta = gradient(beta);
    const ProfilePtr phi = base_profile(grid.dim);
    ScalarField riesz(grid);
    ScalarField tilt(grid);
    for (int k = 0; k < grid.dim; ++k) {
        riesz = riesz + apply_B(OperatorSpec{phi, 0, unit_index(k)}, {geom.f}, {}, grad_beta[k]);
        tilt = tilt + geom.grad_f[k] * grad_beta[k];
    }
    const ScalarField one = constant_field(grid, 1.0);
    const ScalarField lhs = one - (2.0 * a_mu) * phi_tilde;
    const ScalarField rhs = geom.omega * (one + (2.0 * a_mu) * riesz) - tilt;
    return l2_norm(lhs - rhs);
}

double StepperConfig::resolve_dt(const GridSpec& grid, const PhysicalParams& params) const {
    if (dt) {
        if (!(*dt > 0.0)) throw std::invalid_argument("dt must be positive");
        return *dt;
    }
    if (params.Lambda == 0.0) return cfl * grid.spacing();
    return cfl * grid.spacing() / std::abs(params.Lambda);
}

InterfaceState make_state(ScalarField f, const PhysicalParams& params, const SolveOptions& solver, double t,
                          const ScalarField* warm) {
    PhiTilde phi = compute_phi_tilde(f, params.a_mu, solver, warm);
    InterfaceState s;
    s.margin = rt_margin(phi.value, params.a_mu, params.Lambda);
    s.f = std::move(f);
    s.beta = std::move(phi.beta);
    s.phi_tilde = std::move(phi.value);
    s.t = t;
    s.beta_iterations = phi.report.iterations;
    return s;
}

InterfaceState step(const InterfaceState& state, const PhysicalParams& params, const StepperConfig& config,
                    double dt) {
    if (!config.override_rt) {
        const double margin = state.margin.signed_min(params.Lambda);
        if (!(margin >= config.rt_floor)) {
            std::ostringstream why;
            why << "Rayleigh-Taylor margin " << margin << " below floor " << config.rt_floor << " at t=" << state.t;
            throw RtBreach(why.str(), margin);
        }
    }
    const double rate = dt * params.Lambda;
    const ScalarField f1 = state.f + rate * state.phi_tilde;
    if (config.scheme == Scheme::euler) return make_state(f1, params, config.solver, state.t + dt, &state.beta);
    InterfaceState mid = make_state(f1, params, config.solver, state.t + dt, &state.beta);
    const ScalarField f2 = 0.5 * state.f + 0.5 * (mid.f + rate * mid.phi_tilde);
    InterfaceState next = make_state(f2, params, config.solver, state.t + dt, &mid.beta);
    next.beta_iterations += mid.beta_iterations;
    return next;
}

EvolveResult evolve(const ScalarField& f0, const PhysicalParams& params, const StepperConfig& config,
                    const EvolveOptions& options, const SnapshotSink& sink) {
    params.validate();
    if (!(options.t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
    if (options.snapshot_stride < 1) throw std::invalid_argument("snapshot stride must be >= 1");
    const double dt = config.resolve_dt(f0.grid(), params);
    const auto total = static_cast<long long>(std::ceil(options.t_end / dt - 1e-9));

    EvolveResult result;
    InterfaceState state = make_state(f0, params, config.solver);
    auto record = [&](const InterfaceState& s, double used_dt) {
        result.series.push_back(TimeSeriesRow{s.t, s.margin.signed_min(params.Lambda), integrate(s.f),
                                              sobolev_norm(s.f, SobolevOrder{options.sobolev_s}), s.beta_iterations,
                                              used_dt});
    };
    record(state, 0.0);
    if (sink) sink(0, state);
    int last_emitted = 0;
    for (long long k = 0; k < total; ++k) {
        const bool last = k + 1 == total;
        const double t_next = last ? options.t_end : static_cast<double>(k + 1) * dt;
        const double h = last ? options.t_end - state.t : dt;
        try {
            state = step(state, params, config, h);
        } catch (const RtBreach& breach) {
            result.status = EvolveStatus::rt_halt;
            result.halt_reason = breach.what();
            break;
        }
        state.t = t_next;
        ++result.steps;
        record(state, h);
        if (sink && result.steps % options.snapshot_stride == 0) {
            sink(result.steps, state);
            last_emitted = result.steps;
        }
    }
    if (sink && last_emitted != result.steps) sink(result.steps, state);
    result.final_state = std::move(state);
    return result;
}

std::string time_series_header() { return "t,min_rt_margin,volume,sobolev_norm_s,beta_iters,dt"; }

std::string time_series_row(const TimeSeriesRow& row) {
    std::ostringstream out;
    out.precision(17);
    out << row.t << ',' << row.min_rt_margin << ',' << row.volume << ',' << row.sobolev << ',' << row.beta_iters
        << ',' << row.dt;
    return out.str();
}

}  // namespace muskat
