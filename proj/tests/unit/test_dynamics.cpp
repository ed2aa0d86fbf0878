#include <cmath>
#include <numbers>

#include "doctest.h"
#include "muskat/dynamics.hpp"
#include "support.hpp"

using namespace muskat;
using testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField mode(const GridSpec& g, double amplitude, std::vector<int> wave) {
    return make_field(g, FieldRecipe{FieldKind::mode, amplitude, {}, 1.0, std::move(wave)});
}

// Coefficient of `shape` in u by L2 projection.
double amplitude_of(const ScalarField& u, const ScalarField& shape) { return inner(u, shape) / inner(shape, shape); }

double wave_norm(const GridSpec& g, const std::vector<int>& wave) {
    double k2 = 0.0;
    for (int w : wave) k2 += w * w;
    return 2.0 * kPi / g.extent * std::sqrt(k2);
}

}  // namespace

TEST_CASE("reduced parameters from raw physics") {
    const PhysicalParams unit = PhysicalParams::from_raw(1.0, 1.0, 0.0, 1.0, 1.0, 1.0);
    CHECK(unit.Lambda == 1.0);
    CHECK(unit.a_mu == 0.0);
    const PhysicalParams p = PhysicalParams::from_raw(2.0, 9.81, 1.0, 3.0, 3.0, 1.0);
    CHECK(p.Lambda == doctest::Approx(2.0 * 2.0 * 9.81 * 2.0 / 4.0));
    CHECK(p.a_mu == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)PhysicalParams::from_raw(1.0, 1.0, 0.0, 1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_WITH_AS((PhysicalParams{1.0, 1.2}.validate()), "a_mu must lie in (-1, 1)", std::invalid_argument);
}

TEST_CASE("flat interface is an equilibrium") {
    for (int dim = 1; dim <= 2; ++dim) {
        const GridSpec g = dim == 1 ? GridSpec(1, 64, 12.0) : GridSpec(2, 16, 8.0);
        for (double a_mu : {0.0, 0.5, -0.8}) {
            const PhiTilde phi = compute_phi_tilde(ScalarField{g}, a_mu);
            CHECK(max_abs(phi.value) == 0.0);
            CHECK(max_abs(phi.beta) == 0.0);
        }
        const PhysicalParams params{1.0, 0.3};
        const InterfaceState s = make_state(ScalarField{g}, params, {});
        const InterfaceState next = step(s, params, StepperConfig{}, 0.1);
        CHECK(max_abs(next.f) == 0.0);
        CHECK(next.t == doctest::Approx(0.1));
    }
}

TEST_CASE("small modes follow the linearisation -|z|/2") {
    for (int dim = 1; dim <= 2; ++dim) {
        const GridSpec g = dim == 1 ? GridSpec(1, 64, 2.0 * kPi * 2.0) : GridSpec(2, 32, 2.0 * kPi * 2.0);
        const std::vector<int> wave = dim == 1 ? std::vector<int>{3} : std::vector<int>{2, -1};
        const ScalarField f = mode(g, 1e-3, wave);
        const PhiTilde phi = compute_phi_tilde(f, 0.0);
        const ScalarField predicted = (-0.5 * wave_norm(g, wave)) * f;
        CHECK(testing::rel_diff(phi.value, predicted) <= 0.03);
    }
}

TEST_CASE("Phi~ does not depend on Lambda") {
    const GridSpec g(1, 64, 12.0);
    const ScalarField f = make_field(g, FieldRecipe{FieldKind::gaussian_bump, 0.4, {}, 0.9, {}});
    const InterfaceState one = make_state(f, PhysicalParams{1.0, 0.5}, {});
    const InterfaceState other = make_state(f, PhysicalParams{-3.5, 0.5}, {});
    CHECK(testing::bit_equal(one.phi_tilde, other.phi_tilde));
    CHECK(testing::bit_equal(one.beta, other.beta));
}

TEST_CASE("Rayleigh-Taylor margin") {
    Gen gen(307);
    const GridSpec g(1, 64, 12.0);
    SUBCASE("flat interface") {
        const RtMargin up = rt_margin(ScalarField{g}, 0.7, 1.0);
        CHECK(up.min == 1.0);
        CHECK(up.max == 1.0);
        CHECK(up.holds);
        CHECK(up.signed_min(1.0) == 1.0);
        const RtMargin down = rt_margin(ScalarField{g}, 0.7, -1.0);
        CHECK_FALSE(down.holds);
        CHECK(down.signed_min(-1.0) == -1.0);
    }
    SUBCASE("a_mu = 0 gives one for any interface") {
        for (int t = 0; t < 3; ++t) {
            const ScalarField f = gen.bump(g, gen.uniform(0.5, 2.0), 0.9);
            const PhiTilde phi = compute_phi_tilde(f, 0.0);
            const RtMargin m = rt_margin(phi.value, 0.0, 1.0);
            CHECK(m.min == 1.0);
            CHECK(m.max == 1.0);
        }
    }
    SUBCASE("field is 1 - 2 a_mu Phi~ pointwise") {
        const ScalarField f = gen.bump(g, 1.5, 0.9);
        const PhiTilde phi = compute_phi_tilde(f, 0.9);
        const RtMargin m = rt_margin(phi.value, 0.9, 1.0);
        CHECK(testing::bit_equal(m.field, constant_field(g, 1.0) - 1.8 * phi.value));
        CHECK(m.min <= m.max);
    }
}

TEST_CASE("wow identity") {
    SUBCASE("flat interface") {
        const GridSpec g(2, 16, 8.0);
        const InterfaceGeometry flat(ScalarField{g});
        const PhiTilde phi = compute_phi_tilde(flat.f, 0.5);
        CHECK(wow_residual(flat, phi.beta, phi.value, 0.5) <= 1e-14);
    }
    SUBCASE("residual converges under refinement") {
        // Same interface as configs/validate_1d.cfg.
        for (double a_mu : {0.0, 0.5, -0.8}) {
            std::vector<double> r;
            for (int points : {128, 256}) {
                const GridSpec g(1, points, 160.0);
                const ScalarField f = make_field(g, FieldRecipe{FieldKind::gaussian_bump, 0.5, {}, 1.5, {}});
                const PhiTilde phi = compute_phi_tilde(f, a_mu);
                r.push_back(wow_residual(InterfaceGeometry(f), phi.beta, phi.value, a_mu));
            }
            CHECK(std::log2(r[0] / r[1]) >= 1.0);
        }
    }
}

TEST_CASE("single-mode decay per step") {
    const GridSpec g(1, 128, 2.0 * kPi * 4.0);
    const std::vector<int> wave{3};
    const ScalarField shape = mode(g, 1.0, wave);
    const double z = wave_norm(g, wave);
    for (double Lambda : {1.0, -1.0}) {
        const PhysicalParams params{Lambda, 0.0};
        StepperConfig config;
        config.override_rt = Lambda < 0.0;
        const double dt = 0.1 * g.spacing() / std::abs(Lambda);
        InterfaceState s = make_state(1e-4 * shape, params, config.solver);
        const double start = amplitude_of(s.f, shape);
        const int steps = 10;
        for (int k = 0; k < steps; ++k) s = step(s, params, config, dt);
        const double rate = std::log(amplitude_of(s.f, shape) / start) / (steps * dt);
        CHECK(rate == doctest::Approx(-Lambda * z / 2.0).epsilon(0.01));
    }
}

TEST_CASE("unstable orientation halts unless overridden") {
    const GridSpec g(1, 64, 12.0);
    const PhysicalParams params{-1.0, 0.0};
    const InterfaceState s = make_state(mode(g, 1e-3, {2}), params, {});
    try {
        (void)step(s, params, StepperConfig{}, 0.01);
        FAIL("expected RtBreach");
    } catch (const RtBreach& breach) {
        CHECK(breach.margin() == doctest::Approx(-1.0));
    }
    StepperConfig config;
    config.override_rt = true;
    CHECK_NOTHROW((void)step(s, params, config, 0.01));

    const EvolveResult run = evolve(s.f, params, StepperConfig{}, EvolveOptions{1.0, 1, 1.0});
    CHECK(run.status == EvolveStatus::rt_halt);
    CHECK(run.steps == 0);
    CHECK_FALSE(run.halt_reason.empty());
}

TEST_CASE("time step resolution") {
    const GridSpec g(1, 64, 16.0);
    StepperConfig config;
    CHECK(config.resolve_dt(g, PhysicalParams{2.0, 0.0}) == doctest::Approx(0.5 * 0.25 / 2.0));
    CHECK(config.resolve_dt(g, PhysicalParams{-4.0, 0.0}) == doctest::Approx(0.5 * 0.25 / 4.0));
    config.dt = 0.3;
    CHECK(config.resolve_dt(g, PhysicalParams{2.0, 0.0}) == 0.3);
    config.dt = -1.0;
    CHECK_THROWS_AS((void)config.resolve_dt(g, PhysicalParams{}), std::invalid_argument);
}

TEST_CASE("evolve") {
    const GridSpec g(1, 64, 16.0);
    SUBCASE("zero data stays zero and every stride is reported") {
        StepperConfig config;
        config.dt = 0.1;
        std::vector<int> seen;
        const EvolveResult run = evolve(ScalarField{g}, PhysicalParams{1.0, 0.4}, config, EvolveOptions{1.0, 3, 1.0},
                                        [&](int k, const InterfaceState& s) {
                                            seen.push_back(k);
                                            CHECK(max_abs(s.f) == 0.0);
                                        });
        CHECK(run.status == EvolveStatus::completed);
        CHECK(run.steps == 10);
        CHECK(run.series.size() == 11);
        CHECK(run.final_state.t == doctest::Approx(1.0));
        CHECK(seen == std::vector<int>{0, 3, 6, 9, 10});
    }
    SUBCASE("the last step lands on t_end") {
        StepperConfig config;
        config.dt = 0.3;
        const EvolveResult run = evolve(ScalarField{g}, PhysicalParams{}, config, EvolveOptions{1.0, 1, 1.0});
        CHECK(run.steps == 4);
        CHECK(run.final_state.t == 1.0);
        CHECK(run.series.back().dt == doctest::Approx(0.1));
    }
    SUBCASE("Lambda rescales time") {
        const ScalarField f0 = make_field(g, FieldRecipe{FieldKind::gaussian_bump, 0.3, {}, 1.2, {}});
        const double dt = 0.05;
        auto final_f = [&](double Lambda) {
            StepperConfig config;
            config.dt = dt / Lambda;
            return evolve(f0, PhysicalParams{Lambda, 0.5}, config, EvolveOptions{10.0 * dt / Lambda, 100, 1.0})
                .final_state.f;
        };
        const ScalarField one = final_f(1.0);
        const ScalarField two = final_f(2.0);
        CHECK(max_abs(one - two) <= 1e-8);
        CHECK(max_abs(one - f0) > 1e-4);
    }
    SUBCASE("volume is conserved") {
        const ScalarField f0 = make_field(g, FieldRecipe{FieldKind::gaussian_bump, 0.3, {}, 1.2, {}});
        StepperConfig config;
        const EvolveResult run = evolve(f0, PhysicalParams{1.0, 0.3}, config, EvolveOptions{0.5, 1, 1.0});
        CHECK(std::abs(run.series.back().volume - run.series.front().volume) <= 1e-6 * g.extent);
        for (const auto& row : run.series) CHECK(row.min_rt_margin > 0.05);
    }
    CHECK_THROWS_AS((void)evolve(ScalarField{g}, PhysicalParams{1.0, 1.5}, {}, {}), std::invalid_argument);
}

TEST_CASE("time series CSV") {
    CHECK(time_series_header() == "t,min_rt_margin,volume,sobolev_norm_s,beta_iters,dt");
    CHECK(time_series_row(TimeSeriesRow{0.5, 1.0, -0.25, 2.0, 3, 0.125}) == "0.5,1,-0.25,2,3,0.125");
}
